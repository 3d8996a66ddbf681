#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "cvdp/graph.hpp"
#include "cvdp/pipeline.hpp"

using namespace cvdp;
namespace fs = std::filesystem;

namespace {

// Two 8-node communities joined by one antiparallel bridge. The churned
// variant renames the last node of each community, as a new version would.
SimpleDigraph community_graph(bool churn) {
    std::vector<std::string> names;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 8; ++i) {
            std::string n = "c" + std::to_string(c) + ".M" + std::to_string(i);
            if (churn && i == 7) n += "x";
            names.push_back(n);
        }
    std::vector<std::pair<int, int>> edges;
    for (int c = 0; c < 2; ++c) {
        int base = c * 8;
        for (int i = 0; i < 8; ++i) {
            edges.push_back({base + i, base + (i + 1) % 8});
            edges.push_back({base + i, base + (i + 3) % 8});
        }
    }
    edges.push_back({0, 8});
    edges.push_back({8, 0});
    return SimpleDigraph(names, edges);
}

void write_metrics(const fs::path& path, const SimpleDigraph& g) {
    std::ofstream out(path, std::ios::binary);
    out << "name";
    for (const char* m : kMetricNames) out << ',' << m;
    out << ",bug\n";
    int i = 0;
    for (const auto& name : g.names()) {
        out << name;
        for (std::size_t j = 0; j < kMetricNames.size(); ++j)
            out << ',' << ((i * 31 + static_cast<int>(j) * 7) % 17) * 0.25;
        bool community1 = name.rfind("c1", 0) == 0;
        int label = community1 ? 1 : 0;
        if (name.find("M2") != std::string::npos) label = 1 - label;
        out << ',' << label << '\n';
        ++i;
    }
}

struct Fixture {
    fs::path dir;
    std::string workspace;
    ExperimentConfig cfg;
};

Fixture make_fixture(const std::string& tag) {
    Fixture f;
    f.dir = fs::temp_directory_path() / ("cvdp_pipe_" + tag);
    fs::remove_all(f.dir);
    fs::create_directories(f.dir);
    f.workspace = (f.dir / "ws").string();

    SimpleDigraph old_g = community_graph(false);
    SimpleDigraph new_g = community_graph(true);
    write_digraph_file(old_g, (f.dir / "old.graph").string());
    write_digraph_file(new_g, (f.dir / "new.graph").string());
    write_metrics(f.dir / "old.csv", old_g);
    write_metrics(f.dir / "new.csv", new_g);

    PairConfig pair;
    pair.id = "p1";
    pair.old_version.graph_file = (f.dir / "old.graph").string();
    pair.old_version.metrics_csv = (f.dir / "old.csv").string();
    pair.new_version.graph_file = (f.dir / "new.graph").string();
    pair.new_version.metrics_csv = (f.dir / "new.csv").string();
    f.cfg.pairs.push_back(pair);

    f.cfg.dim = 4;
    f.cfg.algorithms = {"node2vec"};
    f.cfg.node2vec.walks_per_node = 5;
    f.cfg.node2vec.walk_length = 20;
    f.cfg.node2vec.window = 3;
    f.cfg.node2vec.negatives = 3;
    f.cfg.line2.sample_count = 2000;
    f.cfg.alignment.k = 3;
    f.cfg.alignment.n_sweep = {8};
    f.cfg.learner.n_trees = 15;
    f.cfg.evaluation.repetitions = 1;
    f.cfg.evaluation.base_seed = 7;
    return f;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::map<std::string, fs::file_time_type> tree_mtimes(const fs::path& root) {
    std::map<std::string, fs::file_time_type> out;
    if (!fs::exists(root)) return out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).generic_string()] = e.last_write_time();
    return out;
}

std::vector<fs::path> stage_files(const std::string& workspace, const char* stage) {
    std::vector<fs::path> out;
    fs::path dir = fs::path(workspace) / "cache" / stage;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

void write_java_tree(const fs::path& dir, bool with_d) {
    fs::create_directories(dir);
    std::ofstream(dir / "A.java") << "package app;\npublic class A extends B { C c = new C(); }\n";
    std::ofstream(dir / "B.java") << "package app;\npublic class B {}\n";
    std::ofstream(dir / "C.java") << "package app;\npublic class C { public void m() {} }\n";
    if (with_d) std::ofstream(dir / "D.java") << "package app;\npublic class D extends B {}\n";
}

void write_app_metrics(const fs::path& path, const std::vector<std::pair<std::string, int>>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "name";
    for (const char* m : kMetricNames) out << ',' << m;
    out << ",bug\n";
    int i = 0;
    for (const auto& [name, bug] : rows) {
        out << name;
        for (std::size_t j = 0; j < kMetricNames.size(); ++j) out << ',' << (i + 1) * 0.5;
        out << ',' << bug << '\n';
        ++i;
    }
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("static_only runs from metrics files alone") {
    auto f = make_fixture("static");
    f.cfg.pairs[0].old_version.graph_file.clear();
    f.cfg.pairs[0].new_version.graph_file.clear();
    f.cfg.scenarios = {"static_only"};
    auto report = run_experiment(f.cfg, f.workspace);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].ok);
    CHECK(report.cells[0].pair == "p1");
    CHECK(report.cells[0].scenario == "static_only");
    CHECK(report.cells[0].auc >= 0.0);
    CHECK(report.cells[0].auc <= 1.0);
    CHECK(report.cells[0].anchors == -1);
    REQUIRE(report.summaries.size() == 1);
    CHECK(report.summaries[0].repetitions == 1);
    CHECK(report.summaries[0].mean_auc == doctest::Approx(report.cells[0].auc));
    CHECK(report.sweep.empty());
    CHECK(report.comparisons.empty());
    CHECK(!report.partial_failures());
}

TEST_CASE("all six scenarios produce the expected report shape") {
    auto f = make_fixture("allscen");
    f.cfg.scenarios.assign(std::begin(kScenarioNames), std::end(kScenarioNames));
    f.cfg.evaluation.repetitions = 2;
    auto report = run_experiment(f.cfg, f.workspace);

    REQUIRE(report.cells.size() == 12);  // 6 scenarios x 2 reps, one algorithm, one N
    for (const auto& c : report.cells) {
        CAPTURE(c.scenario);
        CAPTURE(c.error);
        CHECK(c.ok);
        CHECK(c.auc >= 0.0);
        CHECK(c.auc <= 1.0);
        CHECK(c.f1 >= 0.0);
        CHECK(c.f1 <= 1.0);
    }
    std::set<std::string> ids;
    for (const auto& c : report.cells) ids.insert(c.scenario);
    CHECK(ids == std::set<std::string>{"static_only", "emb_no_align", "emb_random_anchor",
                                       "emb_knn_anchor", "emb_gns_anchor", "meta"});

    REQUIRE(report.summaries.size() == 6);
    for (const auto& s : report.summaries) CHECK(s.repetitions == 2);

    REQUIRE(report.sweep.size() == 4);  // the three anchor strategies plus meta
    for (const auto& p : report.sweep) {
        CHECK(p.requested == 8);
        CHECK(p.anchors == 8);
    }

    CHECK(report.comparisons.size() == 15);  // C(6,2)
    for (const auto& c : report.comparisons) {
        CHECK(!c.ok);  // two paired samples are too few for the signed-rank test
        CHECK(c.error.find("5") != std::string::npos);
    }
}

TEST_CASE("identical reruns hit the cache and reproduce the report byte for byte") {
    auto f = make_fixture("rerun");
    f.cfg.scenarios = {"emb_no_align", "emb_knn_anchor"};
    f.cfg.evaluation.repetitions = 2;

    auto r1 = run_experiment(f.cfg, f.workspace);
    write_report_files(r1, (f.dir / "out1").string());
    auto mtimes = tree_mtimes(fs::path(f.workspace) / "cache");
    CHECK(!mtimes.empty());

    auto r2 = run_experiment(f.cfg, f.workspace);
    write_report_files(r2, (f.dir / "out2").string());
    for (const char* name : {"report.csv", "summary.csv", "comparisons.csv", "anchor_sweep.csv"})
        CHECK(slurp(f.dir / "out1" / name) == slurp(f.dir / "out2" / name));
    CHECK(tree_mtimes(fs::path(f.workspace) / "cache") == mtimes);
}

TEST_CASE("deleting one cached embedding recomputes that artifact only") {
    auto f = make_fixture("evict");
    f.cfg.scenarios = {"emb_knn_anchor"};
    f.cfg.evaluation.repetitions = 2;

    auto r1 = run_experiment(f.cfg, f.workspace);
    write_report_files(r1, (f.dir / "out1").string());
    auto files = stage_files(f.workspace, "embed");
    REQUIRE(files.size() == 4);  // old/new versions x 2 repetitions
    auto mtimes = tree_mtimes(fs::path(f.workspace) / "cache");
    fs::remove(files[0]);

    auto r2 = run_experiment(f.cfg, f.workspace);
    write_report_files(r2, (f.dir / "out2").string());
    CHECK(slurp(f.dir / "out1" / "report.csv") == slurp(f.dir / "out2" / "report.csv"));

    auto after = tree_mtimes(fs::path(f.workspace) / "cache");
    REQUIRE(after.size() == mtimes.size());
    std::string evicted = fs::relative(files[0], fs::path(f.workspace) / "cache").generic_string();
    for (const auto& [rel, t] : mtimes) {
        if (rel == evicted) CHECK(after[rel] != t);
        else CHECK(after[rel] == t);
    }
}

TEST_CASE("old and new versions always embed with different derived seeds") {
    auto f = make_fixture("seeds");
    // identical graphs on both sides: only the derived seed can differ
    fs::copy_file(f.dir / "old.graph", f.dir / "new.graph", fs::copy_options::overwrite_existing);
    fs::copy_file(f.dir / "old.csv", f.dir / "new.csv", fs::copy_options::overwrite_existing);
    f.cfg.scenarios = {"emb_no_align"};
    auto report = run_experiment(f.cfg, f.workspace);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].ok);
    auto files = stage_files(f.workspace, "embed");
    REQUIRE(files.size() == 2);
    CHECK(slurp(files[0]) != slurp(files[1]));
}

TEST_CASE("changing the base seed produces new embedding artifacts") {
    auto f = make_fixture("baseseed");
    f.cfg.scenarios = {"emb_knn_anchor"};
    run_experiment(f.cfg, f.workspace);
    CHECK(stage_files(f.workspace, "embed").size() == 2);
    f.cfg.evaluation.base_seed = 8;
    run_experiment(f.cfg, f.workspace);
    CHECK(stage_files(f.workspace, "embed").size() == 4);
}

TEST_CASE("source trees are extracted once and cached by content") {
    auto f = make_fixture("extract");
    write_java_tree(f.dir / "src_old", false);
    write_java_tree(f.dir / "src_new", true);
    write_app_metrics(f.dir / "old.csv", {{"app.A", 0}, {"app.B", 1}, {"app.C", 1}});
    write_app_metrics(f.dir / "new.csv",
                      {{"app.A", 0}, {"app.B", 1}, {"app.C", 1}, {"app.D", 0}});
    auto& pair = f.cfg.pairs[0];
    pair.old_version.graph_file.clear();
    pair.new_version.graph_file.clear();
    pair.old_version.src_dir = (f.dir / "src_old").string();
    pair.new_version.src_dir = (f.dir / "src_new").string();
    f.cfg.dim = 2;
    f.cfg.alignment.k = 1;
    f.cfg.alignment.n_sweep = {2};
    f.cfg.scenarios = {"emb_knn_anchor"};

    auto r1 = run_experiment(f.cfg, f.workspace);
    REQUIRE(r1.cells.size() == 1);
    CAPTURE(r1.cells[0].error);
    CHECK(r1.cells[0].ok);
    write_report_files(r1, (f.dir / "out1").string());
    auto extracts = stage_files(f.workspace, "extract");
    REQUIRE(extracts.size() == 2);
    auto mtimes = tree_mtimes(fs::path(f.workspace) / "cache");
    fs::remove(extracts[0]);

    auto r2 = run_experiment(f.cfg, f.workspace);
    write_report_files(r2, (f.dir / "out2").string());
    CHECK(slurp(f.dir / "out1" / "report.csv") == slurp(f.dir / "out2" / "report.csv"));
    auto after = tree_mtimes(fs::path(f.workspace) / "cache");
    REQUIRE(after.size() == mtimes.size());
    std::string evicted =
        fs::relative(extracts[0], fs::path(f.workspace) / "cache").generic_string();
    for (const auto& [rel, t] : mtimes) {
        // the re-extracted graph matches byte for byte, so embeddings stay cached
        if (rel == evicted) CHECK(after[rel] != t);
        else CHECK(after[rel] == t);
    }
}

TEST_CASE("cell failures are recorded without stopping other cells") {
    auto f = make_fixture("isolate");
    PairConfig bad = f.cfg.pairs[0];
    bad.id = "p2";
    auto bad_csv = f.dir / "bad.csv";
    write_app_metrics(bad_csv, {{"zz.X1", 0}, {"zz.X2", 1}});
    bad.new_version.metrics_csv = bad_csv.string();
    f.cfg.pairs.push_back(bad);
    f.cfg.scenarios = {"emb_knn_anchor"};
    f.cfg.evaluation.repetitions = 2;

    auto report = run_experiment(f.cfg, f.workspace);
    REQUIRE(report.cells.size() == 4);
    int ok = 0, failed = 0;
    for (const auto& c : report.cells) {
        if (c.ok) {
            ++ok;
            CHECK(c.pair == "p1");
        } else {
            ++failed;
            CHECK(c.pair == "p2");
            CHECK(c.error.find("no joinable modules") != std::string::npos);
        }
    }
    CHECK(ok == 2);
    CHECK(failed == 2);
    CHECK(report.partial_failures());
    REQUIRE(report.summaries.size() == 2);
    CHECK(report.summaries[1].repetitions == 0);

    write_report_files(report, (f.dir / "out").string());
    CHECK(slurp(f.dir / "out" / "report.csv").find("p2") == std::string::npos);
    auto errors = slurp(f.dir / "out" / "errors.csv");
    CHECK(errors.find("pair,scenario,rep,error") == 0);
    CHECK(errors.find("p2,emb_knn_anchor,0,") != std::string::npos);
    CHECK(errors.find("no joinable modules") != std::string::npos);
}

TEST_CASE("a stale errors.csv is removed when a clean report is written") {
    auto f = make_fixture("stale");
    f.cfg.scenarios = {"static_only"};
    auto out_dir = f.dir / "out";
    fs::create_directories(out_dir);
    std::ofstream(out_dir / "errors.csv") << "pair,scenario,rep,error\nold,stuff,0,x\n";
    auto report = run_experiment(f.cfg, f.workspace);
    write_report_files(report, out_dir.string());
    CHECK(!fs::exists(out_dir / "errors.csv"));
    CHECK(slurp(out_dir / "report.csv").find("pair,scenario,rep,auc,f1") == 0);
    CHECK(slurp(out_dir / "summary.csv")
              .find("pair,scenario,mean_auc,std_auc,mean_f1,std_f1,repetitions") == 0);
    CHECK(slurp(out_dir / "comparisons.csv").find("scenario_a,scenario_b,n,w,p_value") == 0);
    CHECK(slurp(out_dir / "anchor_sweep.csv")
              .find("pair,scenario,requested_n,anchors,mean_auc,mean_f1") == 0);
}

TEST_CASE("a fatal config throws before any cell runs") {
    auto f = make_fixture("fatal");
    f.cfg.pairs.clear();
    f.cfg.scenarios = {"static_only"};
    CHECK_THROWS_WITH_AS(run_experiment(f.cfg, f.workspace),
                         doctest::Contains("no version pairs"), Error);
}

TEST_CASE("run_scenario reproduces the matching experiment cells") {
    auto f = make_fixture("single");
    f.cfg.scenarios = {"emb_knn_anchor"};
    auto full = run_experiment(f.cfg, f.workspace);
    auto cells = run_scenario(f.cfg, f.cfg.pairs[0], "emb_knn_anchor", 1, 7, f.workspace);
    REQUIRE(full.cells.size() == 1);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].ok);
    CHECK(cells[0].auc == full.cells[0].auc);
    CHECK(cells[0].f1 == full.cells[0].f1);
}

TEST_CASE("scenario ids carry algorithm and sweep decorations") {
    auto f = make_fixture("decor");
    f.cfg.algorithms = {"node2vec", "line2"};
    f.cfg.alignment.n_sweep = {4, -1};
    f.cfg.scenarios = {"emb_no_align", "emb_knn_anchor", "meta"};
    auto report = run_experiment(f.cfg, f.workspace);

    std::set<std::string> ids;
    for (const auto& c : report.cells) {
        CAPTURE(c.scenario);
        CAPTURE(c.error);
        CHECK(c.ok);
        ids.insert(c.scenario);
    }
    CHECK(ids == std::set<std::string>{
                     "emb_no_align:node2vec", "emb_no_align:line2",
                     "emb_knn_anchor:node2vec[n=4]", "emb_knn_anchor:node2vec[n=all]",
                     "emb_knn_anchor:line2[n=4]", "emb_knn_anchor:line2[n=all]",
                     "meta[n=4]", "meta[n=all]"});

    REQUIRE(report.sweep.size() == 6);
    std::set<std::string> sweep_ids;
    for (const auto& p : report.sweep) {
        sweep_ids.insert(p.scenario);
        if (p.requested == 4) CHECK(p.anchors == 4);
        // 14 modules survive the churn on both sides
        if (p.requested == -1) CHECK(p.anchors == 14);
    }
    CHECK(sweep_ids == std::set<std::string>{"emb_knn_anchor:node2vec", "emb_knn_anchor:line2",
                                             "meta"});
}

}  // TEST_SUITE
