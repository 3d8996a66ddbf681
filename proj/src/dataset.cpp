#include "cvdp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace cvdp {

double FeatureTable::defect_rate() const {
    if (rows.empty()) return 0.0;
    std::size_t positives = 0;
    for (const auto& r : rows) positives += r.label != 0;
    return static_cast<double>(positives) / static_cast<double>(rows.size());
}

int binarize_label(long long bug_count) {
    return bug_count >= 1 ? 1 : 0;
}

std::string normalize_module_name(std::string_view raw) {
    std::string out(raw);
    std::replace(out.begin(), out.end(), '$', '.');
    return out;
}

namespace {

/// One CSV record; handles quoted fields and trailing CR.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::vector<ModuleRecord> load_metrics_csv(const std::string& path,
                                           std::vector<Diagnostic>* diags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open metrics csv: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::Parse, path + ": empty file, expected a header row");
    auto header = split_csv_line(line);
    for (auto& h : header) h = lower(trim(h));

    // module name comes from the LAST column named `name`: PROMISE files lead
    // with a project-id column of the same header
    int name_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == "name") name_col = static_cast<int>(i);
    if (name_col < 0) throw Error(ErrorKind::Parse, path + ": missing column: name");

    int bug_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == "bug") bug_col = static_cast<int>(i);
    if (bug_col < 0) throw Error(ErrorKind::Parse, path + ": missing column: bug");

    std::array<int, 20> metric_cols;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        int col = -1;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == kMetricNames[m]) col = static_cast<int>(i);
        if (col < 0)
            throw Error(ErrorKind::Parse,
                        path + ": missing column: " + std::string(kMetricNames[m]));
        metric_cols[m] = col;
    }

    std::vector<ModuleRecord> records;
    std::set<std::string> seen;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        auto cell = [&](int col) -> std::string {
            if (col >= static_cast<int>(fields.size()))
                throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                                  ": row has too few fields");
            return trim(fields[col]);
        };

        ModuleRecord rec;
        rec.name = normalize_module_name(cell(name_col));
        if (rec.name.empty())
            throw Error(ErrorKind::Parse,
                        path + ":" + std::to_string(lineno) + ": empty module name");
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
            std::string text = cell(metric_cols[m]);
            try {
                rec.metrics[m] = parse_double(text, kMetricNames[m]);
            } catch (const Error&) {
                throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                                  ": non-numeric value '" + text +
                                                  "' in column " + kMetricNames[m]);
            }
            if (!std::isfinite(rec.metrics[m]))
                throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                                  ": non-finite value in column " +
                                                  kMetricNames[m]);
        }
        std::string bug_text = cell(bug_col);
        double bug_val;
        try {
            bug_val = parse_double(bug_text, "bug");
        } catch (const Error&) {
            throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                              ": non-numeric value '" + bug_text +
                                              "' in column bug");
        }
        if (bug_val < 0)
            throw Error(ErrorKind::Parse,
                        path + ":" + std::to_string(lineno) + ": negative bug count");
        rec.bug_count = std::llround(bug_val);

        if (!seen.insert(rec.name).second) {
            if (diags)
                diags->push_back(Diagnostic{Severity::Warning, path, lineno,
                                            "duplicate module '" + rec.name +
                                                "', keeping the first row"});
            continue;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

FeatureTable join_features(const std::vector<ModuleRecord>& records,
                           const EmbeddingMatrix& emb, JoinStats* stats) {
    FeatureTable table;
    for (const char* m : kMetricNames) table.feature_names.emplace_back(m);
    for (int j = 0; j < emb.dim; ++j)
        table.feature_names.push_back("emb_" + std::to_string(j));

    std::map<std::string, int> emb_index;
    for (std::size_t i = 0; i < emb.node_ids.size(); ++i)
        emb_index[normalize_module_name(emb.node_ids[i])] = static_cast<int>(i);

    std::set<std::string> matched_names;
    for (const auto& rec : records) {
        auto it = emb_index.find(rec.name);
        if (it == emb_index.end()) continue;
        FeatureRow row;
        row.name = rec.name;
        row.features.reserve(20 + emb.dim);
        row.features.insert(row.features.end(), rec.metrics.begin(), rec.metrics.end());
        const auto& v = emb.vectors[it->second];
        row.features.insert(row.features.end(), v.begin(), v.end());
        row.label = binarize_label(rec.bug_count);
        matched_names.insert(row.name);
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty())
        throw Error(ErrorKind::State, "no joinable modules");
    if (stats) {
        stats->matched = table.rows.size();
        stats->records_dropped = records.size() - table.rows.size();
        stats->vectors_dropped = 0;
        for (const auto& [name, idx] : emb_index)
            if (!matched_names.count(name)) ++stats->vectors_dropped;
    }
    return table;
}

FeatureTable metrics_table(const std::vector<ModuleRecord>& records) {
    FeatureTable table;
    for (const char* m : kMetricNames) table.feature_names.emplace_back(m);
    for (const auto& rec : records) {
        FeatureRow row;
        row.name = rec.name;
        row.features.assign(rec.metrics.begin(), rec.metrics.end());
        row.label = binarize_label(rec.bug_count);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<std::string> match_modules(const std::vector<std::string>& names0,
                                       const std::vector<std::string>& names1) {
    std::set<std::string> set0;
    for (const auto& n : names0) set0.insert(normalize_module_name(n));
    std::set<std::string> shared;
    for (const auto& n : names1) {
        std::string norm = normalize_module_name(n);
        if (set0.count(norm)) shared.insert(std::move(norm));
    }
    return {shared.begin(), shared.end()};
}

FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, path + ":1: empty feature file");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "name" || header[1] != "label")
        throw Error(ErrorKind::Parse, path + ":1: expected header starting with name,label");
    FeatureTable table;
    table.feature_names.assign(header.begin() + 2, header.end());
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected " +
                                              std::to_string(header.size()) + " fields, got " +
                                              std::to_string(fields.size()));
        FeatureRow row;
        row.name = fields[0];
        long long label = parse_int(fields[1], path + ":" + std::to_string(lineno) + ": label");
        if (label != 0 && label != 1)
            throw Error(ErrorKind::Parse,
                        path + ":" + std::to_string(lineno) + ": label must be 0 or 1");
        row.label = static_cast<int>(label);
        row.features.reserve(table.feature_names.size());
        for (std::size_t i = 2; i < fields.size(); ++i)
            row.features.push_back(
                parse_double(fields[i], path + ":" + std::to_string(lineno) + ": feature " +
                                            table.feature_names[i - 2]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_feature_csv(const FeatureTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << "name,label";
    for (const auto& f : table.feature_names) out << ',' << f;
    out << '\n';
    for (const auto& row : table.rows) {
        out << row.name << ',' << row.label;
        for (double v : row.features) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

}  // namespace cvdp
