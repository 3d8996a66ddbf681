#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cvdp/config.hpp"

using namespace cvdp;
namespace fs = std::filesystem;

namespace {

fs::path fixture_dir() {
    fs::path dir = fs::temp_directory_path() / "cvdp_config_fixture";
    fs::create_directories(dir / "src_old");
    fs::create_directories(dir / "src_new");
    std::ofstream(dir / "old.csv") << "name,bug\n";
    std::ofstream(dir / "new.csv") << "name,bug\n";
    std::ofstream(dir / "old.graph") << "digraph v1\n";
    std::ofstream(dir / "new.graph") << "digraph v1\n";
    return dir;
}

ExperimentConfig disk_config(bool graphs = true) {
    auto dir = fixture_dir();
    ExperimentConfig cfg;
    PairConfig pair;
    pair.id = "p";
    pair.old_version.metrics_csv = (dir / "old.csv").string();
    pair.new_version.metrics_csv = (dir / "new.csv").string();
    if (graphs) {
        pair.old_version.graph_file = (dir / "old.graph").string();
        pair.new_version.graph_file = (dir / "new.graph").string();
    }
    cfg.pairs.push_back(pair);
    cfg.scenarios = {"static_only", "emb_knn_anchor"};
    return cfg;
}

bool mentions(const std::vector<Diagnostic>& diags, const std::string& text,
              Severity severity = Severity::Fatal) {
    for (const auto& d : diags)
        if (d.severity == severity && d.message.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("an empty object parses to the documented defaults") {
    auto cfg = parse_experiment_config("{}", "cfg");
    CHECK(cfg.pairs.empty());
    CHECK(cfg.dim == 32);
    REQUIRE(cfg.algorithms.size() == 2);
    CHECK(cfg.algorithms[0] == "node2vec");
    CHECK(cfg.algorithms[1] == "line2");
    CHECK(cfg.alignment.strategy == "knn");
    CHECK(cfg.alignment.method == "orthogonal");
    CHECK(cfg.alignment.k == 10);
    CHECK(cfg.alignment.n_sweep.empty());
    CHECK(cfg.learner.n_trees == 100);
    CHECK(cfg.learner.max_features == -1);
    CHECK(cfg.evaluation.repetitions == 30);
    CHECK(cfg.evaluation.base_seed == 0);
    CHECK(cfg.scenarios.size() == 6);
    CHECK(cfg.scenarios[0] == "static_only");
    CHECK(cfg.scenarios[5] == "meta");
}

TEST_CASE("every field is overridable from the file") {
    const char* text = R"({
      "pairs": [
        {"id": "ant", "old": {"src": "a", "metrics": "a.csv"},
                      "new": {"graph": "b.graph", "metrics": "b.csv"}},
        {"old": {"graph": "c.graph", "metrics": "c.csv"},
         "new": {"graph": "d.graph", "metrics": "d.csv"}}
      ],
      "embedding": {"dim": 8, "algorithms": ["line2"],
                    "node2vec": {"p": 0.25, "q": 4, "walks_per_node": 5, "walk_length": 40,
                                 "window": 3, "negatives": 2, "epochs": 2, "learning_rate": 0.05},
                    "line2": {"negatives": 7, "sample_count": 1234, "learning_rate": 0.1}},
      "alignment": {"strategy": "gns", "method": "linear", "k": 5, "n_sweep": [8, 16, "all"]},
      "learner": {"n_trees": 10, "max_features": 3, "min_samples_leaf": 2, "max_depth": 4},
      "evaluation": {"repetitions": 3, "base_seed": 99},
      "scenarios": ["emb_gns_anchor"]
    })";
    auto cfg = parse_experiment_config(text, "cfg");
    REQUIRE(cfg.pairs.size() == 2);
    CHECK(cfg.pairs[0].id == "ant");
    CHECK(cfg.pairs[0].old_version.src_dir == "a");
    CHECK(cfg.pairs[0].new_version.graph_file == "b.graph");
    CHECK(cfg.pairs[1].id == "pair2");
    CHECK(cfg.dim == 8);
    REQUIRE(cfg.algorithms.size() == 1);
    CHECK(cfg.algorithms[0] == "line2");
    CHECK(cfg.node2vec.p == doctest::Approx(0.25));
    CHECK(cfg.node2vec.epochs == 2);
    CHECK(cfg.line2.sample_count == 1234);
    CHECK(cfg.alignment.strategy == "gns");
    CHECK(cfg.alignment.method == "linear");
    CHECK(cfg.alignment.k == 5);
    REQUIRE(cfg.alignment.n_sweep.size() == 3);
    CHECK(cfg.alignment.n_sweep[2] == -1);
    CHECK(cfg.learner.n_trees == 10);
    CHECK(cfg.learner.max_depth == 4);
    CHECK(cfg.evaluation.repetitions == 3);
    CHECK(cfg.evaluation.base_seed == 99);
    REQUIRE(cfg.scenarios.size() == 1);
    CHECK(cfg.scenarios[0] == "emb_gns_anchor");
}

TEST_CASE("the default sweep is d, 2d, 4d and all") {
    ExperimentConfig cfg;
    cfg.dim = 16;
    auto sweep = cfg.resolved_sweep();
    REQUIRE(sweep.size() == 4);
    CHECK(sweep[0] == 16);
    CHECK(sweep[1] == 32);
    CHECK(sweep[2] == 64);
    CHECK(sweep[3] == -1);
    cfg.alignment.n_sweep = {5};
    REQUIRE(cfg.resolved_sweep().size() == 1);
    CHECK(cfg.resolved_sweep()[0] == 5);
}

TEST_CASE("embed_config carries the shared dim and per-algorithm params") {
    ExperimentConfig cfg;
    cfg.dim = 12;
    cfg.node2vec.p = 0.5;
    cfg.line2.negatives = 9;
    auto n2v = cfg.embed_config("node2vec");
    CHECK(n2v.algorithm == "node2vec");
    CHECK(n2v.dim == 12);
    CHECK(n2v.node2vec.p == doctest::Approx(0.5));
    auto l2 = cfg.embed_config("line2");
    CHECK(l2.algorithm == "line2");
    CHECK(l2.line2.negatives == 9);
}

TEST_CASE("unknown keys are reported as warnings") {
    std::vector<Diagnostic> diags;
    parse_experiment_config(R"({"embedding": {"dims": 8}, "learners": {}})", "cfg", &diags);
    CHECK(mentions(diags, "unknown key 'dims'", Severity::Warning));
    CHECK(mentions(diags, "unknown key 'learners'", Severity::Warning));
}

TEST_CASE("malformed json names the config file") {
    CHECK_THROWS_WITH_AS(parse_experiment_config("{oops", "exp.json"),
                         doctest::Contains("exp.json"), Error);
}

TEST_CASE("shape errors are configuration errors with a path context") {
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"pairs": 3})", "cfg"),
                         doctest::Contains("cfg.pairs"), Error);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"pairs": [{"id": "x"}]})", "cfg"),
                         doctest::Contains("'old' and 'new'"), Error);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"embedding": {"dim": "big"}})", "cfg"),
                         doctest::Contains("expected an integer"), Error);
    CHECK_THROWS_WITH_AS(
        parse_experiment_config(R"({"alignment": {"n_sweep": [1.5]}})", "cfg"),
        doctest::Contains("integers or \"all\""), Error);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"scenarios": [3]})", "cfg"),
                         doctest::Contains("expected strings"), Error);
}

TEST_CASE("a complete on-disk config validates cleanly") {
    auto diags = validate_config(disk_config());
    CHECK(!has_fatal(diags));
}

TEST_CASE("missing referenced files are fatal and all reported at once") {
    auto cfg = disk_config();
    cfg.pairs[0].old_version.metrics_csv = "/nonexistent/old.csv";
    cfg.pairs[0].new_version.graph_file = "/nonexistent/new.graph";
    auto diags = validate_config(cfg);
    CHECK(mentions(diags, "/nonexistent/old.csv"));
    CHECK(mentions(diags, "/nonexistent/new.graph"));
    CHECK(has_fatal(diags));
}

TEST_CASE("metrics files are always required") {
    auto cfg = disk_config();
    cfg.pairs[0].new_version.metrics_csv.clear();
    CHECK(mentions(validate_config(cfg), "missing metrics file"));
}

TEST_CASE("graph sources are required only for embedding scenarios") {
    auto cfg = disk_config(false);
    CHECK(mentions(validate_config(cfg), "needs a source directory or graph file"));
    cfg.scenarios = {"static_only"};
    CHECK(!has_fatal(validate_config(cfg)));
}

TEST_CASE("giving both a source tree and a graph file is fatal") {
    auto cfg = disk_config();
    cfg.pairs[0].old_version.src_dir = (fixture_dir() / "src_old").string();
    CHECK(mentions(validate_config(cfg), "not both"));
}

TEST_CASE("scenario and pair list problems are fatal") {
    auto cfg = disk_config();
    cfg.scenarios = {"static_only", "embeddings"};
    CHECK(mentions(validate_config(cfg), "unknown scenario 'embeddings'"));
    cfg = disk_config();
    cfg.scenarios.clear();
    CHECK(mentions(validate_config(cfg), "scenarios list is empty"));
    cfg = disk_config();
    cfg.pairs.clear();
    CHECK(mentions(validate_config(cfg), "no version pairs"));
    cfg = disk_config();
    cfg.pairs.push_back(cfg.pairs[0]);
    CHECK(mentions(validate_config(cfg), "duplicate pair id 'p'"));
}

TEST_CASE("range problems are fatal, a small sweep is only a warning") {
    auto cfg = disk_config();
    cfg.alignment.n_sweep = {0};
    CHECK(mentions(validate_config(cfg), "must be >= 1"));
    cfg.alignment.n_sweep = {8};
    auto diags = validate_config(cfg);
    CHECK(!has_fatal(diags));
    CHECK(mentions(diags, "below embedding dimension", Severity::Warning));

    cfg = disk_config();
    cfg.alignment.strategy = "nearest";
    CHECK(mentions(validate_config(cfg), "unknown anchor strategy"));
    cfg = disk_config();
    cfg.alignment.method = "affine";
    CHECK(mentions(validate_config(cfg), "unknown alignment method"));
    cfg = disk_config();
    cfg.dim = 0;
    CHECK(mentions(validate_config(cfg), "dim must be >= 1"));
    cfg = disk_config();
    cfg.evaluation.repetitions = 0;
    CHECK(mentions(validate_config(cfg), "repetitions must be >= 1"));
    cfg = disk_config();
    cfg.learner.n_trees = 0;
    CHECK(mentions(validate_config(cfg), "n_trees must be >= 1"));
    cfg = disk_config();
    cfg.algorithms = {"node2vec", "node2vec"};
    CHECK(mentions(validate_config(cfg), "duplicate embedding algorithm"));
    cfg = disk_config();
    cfg.algorithms = {"deepwalk"};
    CHECK(mentions(validate_config(cfg), "unknown embedding algorithm 'deepwalk'"));
    cfg = disk_config();
    cfg.node2vec.p = 0.0;
    CHECK(mentions(validate_config(cfg), "p must be > 0"));
}

TEST_CASE("load_experiment_config reads from disk and reports io problems") {
    auto dir = fixture_dir();
    auto path = (dir / "exp.json").string();
    std::ofstream(path) << R"({"evaluation": {"repetitions": 4}})";
    auto cfg = load_experiment_config(path);
    CHECK(cfg.evaluation.repetitions == 4);
    CHECK_THROWS_WITH_AS(load_experiment_config((dir / "missing.json").string()),
                         doctest::Contains("cannot open config file"), Error);
}

}  // TEST_SUITE
