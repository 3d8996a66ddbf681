#include "cvdp/extract.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace cvdp {

void TypeDictionary::add(const std::string& fqn, TypeKind kind) {
    entries_.emplace(fqn, kind);
}

bool TypeDictionary::contains(const std::string& fqn) const {
    return entries_.count(fqn) != 0;
}

std::optional<TypeKind> TypeDictionary::kind_of(const std::string& fqn) const {
    auto it = entries_.find(fqn);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

TypeDictionary build_type_dictionary(const std::vector<java::ParsedUnit>& units,
                                     std::vector<Diagnostic>* diags) {
    TypeDictionary dict;
    for (const auto& unit : units) {
        for (const auto& decl : unit.types) {
            std::string fqn = unit.package_name.empty()
                                  ? decl.relative_name
                                  : unit.package_name + "." + decl.relative_name;
            if (dict.contains(fqn)) {
                if (diags)
                    diags->push_back(Diagnostic{
                        Severity::Warning, unit.path, decl.line,
                        "duplicate type declaration '" + fqn + "', keeping the first"});
                continue;
            }
            dict.add(fqn, decl.kind);
        }
    }
    return dict;
}

std::optional<std::string> resolve_type_name(const std::string& name,
                                             const ResolveContext& ctx,
                                             const TypeDictionary& dict,
                                             std::vector<Diagnostic>* diags) {
    if (name.empty()) return std::nullopt;
    if (dict.contains(name)) return name;

    auto dot = name.find('.');
    std::string head = dot == std::string::npos ? name : name.substr(0, dot);
    std::string rest = dot == std::string::npos ? "" : name.substr(dot);  // ".Inner..."

    if (ctx.single_imports) {
        for (const auto& [simple, fqn] : *ctx.single_imports) {
            if (simple != head) continue;
            std::string full = fqn + rest;
            if (dict.contains(full)) return full;
            return std::nullopt;  // import decides the binding even if external
        }
    }

    std::string in_package = ctx.package_name.empty() ? name : ctx.package_name + "." + name;
    if (dict.contains(in_package)) return in_package;

    std::vector<std::string> matches;
    if (ctx.wildcard_imports) {
        for (const auto& pkg : *ctx.wildcard_imports) {
            std::string full = pkg + "." + name;
            if (dict.contains(full)) matches.push_back(full);
        }
    }
    if (!matches.empty()) {
        if (matches.size() > 1 && diags)
            diags->push_back(Diagnostic{
                Severity::Warning, "", 0,
                "ambiguous wildcard resolution for '" + name + "', using " + matches.front()});
        return matches.front();
    }
    return std::nullopt;
}

std::vector<SourceRef> resolve_refs(const std::vector<java::ParsedUnit>& units,
                                    const TypeDictionary& dict,
                                    std::vector<Diagnostic>* diags) {
    // first declaration of an fqn wins; refs from shadowed re-declarations are
    // not attributed to the surviving node
    std::map<std::string, std::pair<std::size_t, int>> winner;
    for (std::size_t u = 0; u < units.size(); ++u) {
        for (std::size_t t = 0; t < units[u].types.size(); ++t) {
            const auto& decl = units[u].types[t];
            std::string fqn = units[u].package_name.empty()
                                  ? decl.relative_name
                                  : units[u].package_name + "." + decl.relative_name;
            winner.emplace(std::move(fqn), std::make_pair(u, static_cast<int>(t)));
        }
    }

    std::vector<SourceRef> out;
    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto& unit = units[u];
        ResolveContext ctx;
        ctx.package_name = unit.package_name;
        ctx.single_imports = &unit.single_imports;
        ctx.wildcard_imports = &unit.wildcard_imports;
        for (const auto& ref : unit.refs) {
            if (ref.owner < 0 || ref.owner >= static_cast<int>(unit.types.size())) continue;
            const auto& owner_decl = unit.types[ref.owner];
            std::string from = unit.package_name.empty()
                                   ? owner_decl.relative_name
                                   : unit.package_name + "." + owner_decl.relative_name;
            auto win = winner.find(from);
            if (win == winner.end() || win->second != std::make_pair(u, ref.owner)) continue;
            if (!dict.contains(from)) continue;
            auto to = resolve_type_name(ref.name, ctx, dict, diags);
            if (!to) continue;
            if (*to == from) continue;
            out.push_back(SourceRef{from, *to, java::ref_site_edge_type(ref.site),
                                    unit.path, ref.line});
        }
    }
    return out;
}

CdnGraph build_cdn(const std::vector<java::ParsedUnit>& units,
                   const TypeDictionary& dict,
                   std::vector<Diagnostic>* diags) {
    std::vector<CdnNode> nodes;
    nodes.reserve(dict.size());
    for (const auto& [fqn, kind] : dict.entries())
        nodes.push_back(CdnNode{fqn, kind});

    std::set<CdnEdge> edges;
    for (const auto& ref : resolve_refs(units, dict, diags))
        edges.insert(CdnEdge{ref.from, ref.to, ref.type});

    return CdnGraph(std::move(nodes), std::vector<CdnEdge>(edges.begin(), edges.end()));
}

ExtractResult extract_directory(const std::string& src_dir, int workers) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(src_dir))
        throw Error(ErrorKind::Io, "source directory not found: " + src_dir);

    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(src_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());

    std::vector<java::ParsedUnit> parsed(files.size());
    std::vector<std::string> failures(files.size());
    parallel_for(files.size(), workers, [&](std::size_t i) {
        std::ifstream in(files[i], std::ios::binary);
        if (!in) {
            failures[i] = "cannot open file";
            return;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            parsed[i] = java::parse_java_source(buf.str(), files[i]);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });

    ExtractResult result;
    std::vector<java::ParsedUnit> units;
    units.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!failures[i].empty()) {
            ++result.files_skipped;
            result.diagnostics.push_back(Diagnostic{
                Severity::Warning, files[i], 0, "skipping file: " + failures[i]});
            continue;
        }
        ++result.files_parsed;
        for (const auto& d : parsed[i].diagnostics) result.diagnostics.push_back(d);
        units.push_back(std::move(parsed[i]));
    }

    TypeDictionary dict = build_type_dictionary(units, &result.diagnostics);
    result.graph = build_cdn(units, dict, &result.diagnostics);
    return result;
}

}  // namespace cvdp
