#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/harness/artifact.hpp"
#include "tsforge/harness/experiment_config.hpp"
#include "tsforge/harness/manifest.hpp"
#include "tsforge/harness/pipeline.hpp"
#include "tsforge/harness/report.hpp"

namespace tsforge {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

constexpr const char* kMinimal = R"({
  "source": {"synthetic": {"count": 3}},
  "target": {"synthetic": {"count": 2}},
  "models": [{"family": "theta"}]
})";

TEST(ExperimentConfig, Defaults) {
    const auto c = parse_experiment_config(kMinimal, "/base");
    EXPECT_EQ(c.validation_length, 18u);
    EXPECT_EQ(c.cluster_k, 4u);
    EXPECT_EQ(c.alpha, 0.05);
    EXPECT_EQ(c.training.patience, 2u);
    EXPECT_EQ(c.fine_tune.learning_rate, 5e-6);
    EXPECT_EQ(c.horizons, (std::vector<std::size_t>{1, 3, 6, 12}));
    EXPECT_EQ(c.jobs, 1u);
    EXPECT_EQ(c.output_dir, fs::path("/base/tsforge-out"));
    ASSERT_EQ(c.models.size(), 1u);
    EXPECT_EQ(c.models[0].name(), "theta");
}

TEST(ExperimentConfig, ModelNamesAndNeuralDefaultMode) {
    const auto c = parse_experiment_config(R"({
      "source": {"synthetic": {"count": 3}}, "target": {"synthetic": {"count": 2}},
      "models": [{"family": "tcn"}, {"family": "lstm", "mode": "scratch"}, {"family": "ets"}]
    })", "/b");
    EXPECT_EQ(c.models[0].name(), "tcn_transfer");
    EXPECT_EQ(c.models[1].name(), "lstm_scratch");
    EXPECT_EQ(c.models[2].name(), "ets");
}

TEST(ExperimentConfig, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW((void)parse_experiment_config(R"({"source": {"synthetic": {"count": 3}},
      "target": {"synthetic": {"count": 2}}, "models": [{"family": "theta"}], "sede": 1})", "/"),
                 Error);
    EXPECT_THROW((void)parse_experiment_config(R"({"source": {"synthetic": {"count": 3}},
      "target": {"synthetic": {"count": 2}}, "models": [{"family": "theta", "moed": "x"}]})", "/"),
                 Error);
    EXPECT_THROW((void)parse_experiment_config(R"({"target": {"synthetic": {"count": 2}},
      "models": [{"family": "theta"}]})", "/"),
                 Error);
    EXPECT_THROW((void)parse_experiment_config("{not json", "/"), ParseError);
    EXPECT_THROW((void)parse_experiment_config(R"({"source": {"synthetic": {"count": 3}},
      "target": {"synthetic": {"count": 2}}, "models": [{"family": "prophet"}]})", "/"),
                 Error);
}

TEST(ExperimentConfig, HashIgnoresJobsAndOutputOnly) {
    const auto a = parse_experiment_config(kMinimal, "/a");
    auto b = a;
    b.jobs = 8;
    b.output_dir = "/elsewhere";
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 64u);
    b.seed = 43;
    EXPECT_NE(config_hash(a), config_hash(b));
    // Canonical JSON re-parses to the same configuration.
    const auto again = parse_experiment_config(canonical_config_json(a), "/a");
    EXPECT_EQ(config_hash(again), config_hash(a));
}

TEST(ExperimentConfig, RelativePathsResolveAgainstConfigDirectory) {
    const test::TempDir dir("cfg");
    write_text(dir.path() / "src.csv", "id,v1\n");
    write_text(dir.path() / "cfg.json", R"({
      "source": {"path": "src.csv"}, "target": {"synthetic": {"count": 2}},
      "models": [{"family": "theta"}], "output_dir": "run"})");
    const auto c = load_experiment_config(dir.path() / "cfg.json");
    ASSERT_TRUE(c.source.path.has_value());
    EXPECT_EQ(c.source.path->filename(), "src.csv");
    EXPECT_TRUE(c.source.path->is_absolute());
    EXPECT_EQ(c.output_dir.filename(), "run");
    EXPECT_TRUE(c.output_dir.is_absolute());
    EXPECT_EQ(config_hash(c), config_hash(load_experiment_config(dir.path() / "cfg.json")));
    // The hash follows the contents of referenced files.
    const auto before = config_hash(c);
    write_text(dir.path() / "src.csv", "id,v1\nA,1\n");
    EXPECT_NE(config_hash(load_experiment_config(dir.path() / "cfg.json")), before);
    EXPECT_THROW((void)load_experiment_config(dir.path() / "missing.json"), Error);
}

ForecasterConfig small_tcn() {
    ForecasterConfig c;
    c.family = Family::tcn;
    c.input_size = 6;
    c.horizon = 3;
    c.tcn.filters = 3;
    c.tcn.kernel = 2;
    c.tcn.dilations = {1, 2};
    return c;
}

TEST(Artifact, RoundTripIsBitExact) {
    ModelArtifact a;
    a.forecaster = build_network(small_tcn(), 7, GridPolicy::relaxed);
    a.forecaster.neural_state().scaler = fit_scaler(std::vector<double>{3.0, 9.5, 4.25});
    a.forecaster.neural_state().metadata.validation_history = {0.5, 0.25};
    a.provenance = {"target:S1", 7, 2, "1970-01-01T00:00:00Z"};
    const auto text = artifact_to_json(a);
    const auto b = artifact_from_json(text);
    EXPECT_EQ(artifact_to_json(b), text);
    EXPECT_EQ(b.provenance.corpus, "target:S1");
    const std::vector<double> w{4.0, 5.1, 6.2, 5.9, 7.7, 8.3};
    EXPECT_EQ(predict_network(a.forecaster, w), predict_network(b.forecaster, w));

    const test::TempDir dir("artifact");
    persist_model(dir.path() / "m" / "x.json", a);
    EXPECT_EQ(artifact_to_json(load_model(dir.path() / "m" / "x.json")), text);
    for (const auto& e : fs::directory_iterator(dir.path() / "m")) {
        EXPECT_NE(e.path().extension(), ".tmp");
    }
}

TEST(Artifact, TruncatedAndMigratedInputs) {
    ModelArtifact a;
    a.forecaster = build_network(small_tcn(), 7, GridPolicy::relaxed);
    const auto text = artifact_to_json(a);
    EXPECT_THROW((void)artifact_from_json(text.substr(0, text.size() / 2)), ParseError);
    EXPECT_THROW((void)artifact_from_json(""), ParseError);
    auto migrated = text;
    const auto pos = migrated.find("\"schema_version\": 1");
    const auto pos2 = migrated.find("\"schema_version\":1");
    ASSERT_TRUE(pos != std::string::npos || pos2 != std::string::npos);
    if (pos != std::string::npos) {
        migrated.replace(pos, 19, "\"schema_version\": 2");
    } else {
        migrated.replace(pos2, 18, "\"schema_version\":2");
    }
    EXPECT_THROW((void)artifact_from_json(migrated), MigrationError);
    const test::TempDir dir("artifact");
    EXPECT_THROW((void)load_model(dir.path() / "none.json"), Error);
}

TEST(Artifact, ReproducibleTimestamp) {
    ::setenv("SOURCE_DATE_EPOCH", "86461", 1);
    EXPECT_EQ(reproducible_timestamp(), "1970-01-02T00:01:01Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    EXPECT_EQ(reproducible_timestamp(), "1970-01-01T00:00:00Z");
}

TEST(Manifest, RoundTripAndInventory) {
    const test::TempDir dir("manifest");
    fs::create_directories(dir.path() / "sub");
    write_text(dir.path() / "sub" / "b.csv", "abc");
    write_text(dir.path() / "a.txt", "");
    write_text(dir.path() / "c.tmp", "partial");
    RunManifest m;
    m.config_hash = "h";
    m.mark_complete("ingest");
    m.mark_complete("ingest");
    m.failures.push_back({"evaluate", "S1/theta", "boom"});
    m.failures.push_back({"ingest", "S2", "short"});
    EXPECT_EQ(m.completed_stages.size(), 1u);
    m.clear_failures("ingest");
    ASSERT_EQ(m.failures.size(), 1u);
    save_manifest(dir.path(), m);
    ASSERT_EQ(m.files.size(), 2u);
    EXPECT_EQ(m.files[0].path, "a.txt");
    EXPECT_EQ(m.files[1].path, "sub/b.csv");
    EXPECT_EQ(m.files[1].sha256,
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(m.files[1].bytes, 3u);
    const auto loaded = load_manifest(dir.path());
    ASSERT_TRUE(loaded.has_value());
    EXPECT_EQ(loaded->files, m.files);
    EXPECT_EQ(loaded->failures, m.failures);
    EXPECT_EQ(loaded->completed_stages, m.completed_stages);
    EXPECT_TRUE(inventory_matches(dir.path(), *loaded));
    write_text(dir.path() / "sub" / "b.csv", "abd");
    EXPECT_FALSE(inventory_matches(dir.path(), *loaded));
    fs::remove(dir.path() / "sub" / "b.csv");
    EXPECT_FALSE(inventory_matches(dir.path(), *loaded));
    EXPECT_THROW((void)manifest_from_json("[]"), Error);
    const test::TempDir empty("manifest");
    EXPECT_FALSE(load_manifest(empty.path()).has_value());
}

TEST(ParallelFor, CoversEveryIndexAndRethrowsLowest) {
    for (const std::size_t jobs : {1u, 2u, 4u}) {
        std::vector<std::atomic<int>> hits(50);
        parallel_for(50, jobs, [&](std::size_t i) { hits[i] += 1; });
        for (const auto& h : hits) {
            EXPECT_EQ(h.load(), 1);
        }
        std::atomic<int> ran{0};
        try {
            parallel_for(20, jobs, [&](std::size_t i) {
                ran += 1;
                if (i == 13 || i == 7) {
                    throw InvalidArgument("task " + std::to_string(i));
                }
            });
            FAIL() << "expected an exception";
        } catch (const InvalidArgument& e) {
            EXPECT_STREQ(e.what(), "task 7");
        }
        EXPECT_EQ(ran.load(), 20);
    }
}

TEST(SanitizeName, SafeAndInjectiveOnPlainIds) {
    EXPECT_EQ(sanitize_name("M4-Monthly_12.a"), "M4-Monthly_12.a");
    EXPECT_EQ(sanitize_name("a/b c"), "a_b_c");
    EXPECT_EQ(sanitize_name(".."), "_..");
    EXPECT_EQ(sanitize_name(""), "_");
    EXPECT_EQ(sanitize_name("../etc"), ".._etc");
}

TEST(Stages, NamesAndPrerequisites) {
    for (const Stage s : all_stages()) {
        EXPECT_EQ(parse_stage(to_string(s)), s);
    }
    EXPECT_THROW((void)parse_stage("deploy"), InvalidArgument);
    EXPECT_TRUE(stage_prerequisites(Stage::ingest).empty());
    EXPECT_EQ(stage_prerequisites(Stage::finetune), std::vector<Stage>{Stage::pretrain});
    EXPECT_EQ(stage_prerequisites(Stage::cluster), std::vector<Stage>{Stage::features});
    EXPECT_EQ(stage_prerequisites(Stage::rank), std::vector<Stage>{Stage::evaluate});
}

ExperimentConfig small_run(const fs::path& out, std::uint64_t seed = 5, std::size_t jobs = 1) {
    auto c = parse_experiment_config(R"({
      "source": {"synthetic": {"count": 5, "length": 72, "seed": 11}},
      "target": {"synthetic": {"count": 4, "length": 72, "seed": 12}},
      "horizons": [3],
      "models": [{"family": "tcn", "mode": "transfer"}, {"family": "tcn", "mode": "scratch"},
                 {"family": "theta"}, {"family": "seasonal_naive"}],
      "networks": {"tcn": {"filters": 3, "kernel": 2, "dilations": [1, 2]}},
      "grid_policy": "relaxed",
      "training": {"max_epochs": 2},
      "fine_tune": {"max_epochs": 2},
      "cluster_k": 2,
      "quality_k": [2, 3]
    })", out.parent_path());
    c.output_dir = out;
    c.seed = seed;
    c.jobs = jobs;
    return c;
}

struct Logged {
    std::vector<std::string> lines;
    PipelineOptions options(std::optional<Stage> stage = std::nullopt) {
        PipelineOptions o;
        o.stage = stage;
        o.log = [this](const std::string& s) { lines.push_back(s); };
        return o;
    }
    [[nodiscard]] std::size_t count(const std::string& needle) const {
        std::size_t n = 0;
        for (const auto& l : lines) {
            n += l.find(needle) != std::string::npos ? 1 : 0;
        }
        return n;
    }
};

class PipelineRun : public ::testing::Test {
protected:
    test::TempDir dir{"pipeline"};
};

TEST_F(PipelineRun, FullRunThenSkipThenRecompute) {
    const auto cfg = small_run(dir.path() / "out");
    Logged first;
    const auto m1 = run_pipeline(cfg, first.options());
    EXPECT_EQ(m1.completed_stages.size(), all_stages().size());
    for (const char* f : {"data/source.csv", "data/target.csv", "scores.csv", "summary.csv",
                          "features.csv", "assignment.csv", "profiles.csv", "ranking.json",
                          "report.md", "validation.csv", "records.csv"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
    }
    EXPECT_EQ(first.count("complete, skipped"), 0u);

    Logged second;
    const auto m2 = run_pipeline(cfg, second.options());
    EXPECT_EQ(second.count("complete, skipped"), all_stages().size());
    EXPECT_EQ(m2.files, m1.files);

    // Report content depends only on the files of the run.
    EXPECT_EQ(render_report(cfg, m2, cfg.output_dir), read_text(cfg.output_dir / "report.md"));

    Logged third;
    const auto m3 = run_pipeline(small_run(dir.path() / "out", 6), third.options());
    EXPECT_EQ(third.count("complete, skipped"), 0u);
    EXPECT_NE(m3.config_hash, m1.config_hash);
}

TEST_F(PipelineRun, TamperedFileInvalidatesStage) {
    const auto cfg = small_run(dir.path() / "out");
    Logged first;
    (void)run_pipeline(cfg, first.options(Stage::features));
    write_text(cfg.output_dir / "features.csv", "tampered\n");
    Logged second;
    const auto m = run_pipeline(cfg, second.options(Stage::features));
    EXPECT_LT(second.count("complete, skipped"), 2u);
    EXPECT_NE(read_text(cfg.output_dir / "features.csv"), "tampered\n");
    EXPECT_TRUE(inventory_matches(cfg.output_dir, m));
}

TEST_F(PipelineRun, StageOnlyRunReportsMissingSections) {
    const auto cfg = small_run(dir.path() / "out");
    Logged log;
    const auto m = run_pipeline(cfg, log.options(Stage::features));
    EXPECT_TRUE(m.stage_complete("ingest"));
    EXPECT_TRUE(m.stage_complete("features"));
    EXPECT_FALSE(m.stage_complete("pretrain"));
    EXPECT_FALSE(fs::exists(cfg.output_dir / "scores.csv"));
    const auto report = render_report(cfg, m, cfg.output_dir);
    EXPECT_NE(report.find("not run"), std::string::npos);
    EXPECT_NE(report.find("`evaluate`"), std::string::npos);
    EXPECT_EQ(render_report(cfg, m, cfg.output_dir), report);
}

TEST_F(PipelineRun, ParallelJobsProduceIdenticalFiles) {
    const auto a = run_pipeline(small_run(dir.path() / "one", 5, 1));
    const auto b = run_pipeline(small_run(dir.path() / "two", 5, 2));
    EXPECT_EQ(a.config_hash, b.config_hash);
    EXPECT_EQ(a.files, b.files);
    EXPECT_EQ(a.failures, b.failures);
}

TEST_F(PipelineRun, TemporariesAreRemovedAtStart) {
    const auto cfg = small_run(dir.path() / "out");
    fs::create_directories(cfg.output_dir / "models");
    write_text(cfg.output_dir / "models" / "half.json.tmp", "{");
    (void)run_pipeline(cfg, PipelineOptions{Stage::ingest, false, {}});
    EXPECT_FALSE(fs::exists(cfg.output_dir / "models" / "half.json.tmp"));
}

}  // namespace
}  // namespace tsforge
