#include "tsforge/harness/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "json_io.hpp"
#include "tsforge/analysis/clustering.hpp"
#include "tsforge/analysis/features.hpp"
#include "tsforge/common/csv.hpp"
#include "tsforge/common/hash.hpp"
#include "tsforge/common/rng.hpp"
#include "tsforge/evaluation/cd_diagram.hpp"
#include "tsforge/evaluation/metrics.hpp"
#include "tsforge/evaluation/ranking.hpp"
#include "tsforge/evaluation/records.hpp"
#include "tsforge/harness/artifact.hpp"
#include "tsforge/harness/report.hpp"
#include "tsforge/synthetic.hpp"

namespace fs = std::filesystem;

namespace tsforge {

namespace {

// Relative output paths.
const fs::path kSourceCsv = "data/source.csv";
const fs::path kTargetCsv = "data/target.csv";
const fs::path kRejectedCsv = "data/rejected.csv";
const fs::path kValidationCsv = "validation.csv";
const fs::path kRecordsCsv = "records.csv";
const fs::path kScoresCsv = "scores.csv";
const fs::path kSummaryCsv = "summary.csv";
const fs::path kSelectionCsv = "input_size_selection.csv";
const fs::path kDistributionCsv = "input_size_distribution.csv";
const fs::path kExternalRejectedCsv = "external_rejected.csv";
const fs::path kFeaturesCsv = "features.csv";
const fs::path kExclusionsCsv = "feature_exclusions.csv";
const fs::path kAssignmentCsv = "assignment.csv";
const fs::path kProfilesCsv = "profiles.csv";
const fs::path kQualityJson = "cluster_quality.json";
const fs::path kRankingJson = "ranking.json";
const fs::path kReportMd = "report.md";

fs::path global_model_path(Family family, std::size_t h, std::size_t w) {
    return fs::path("models/global") /
           (to_string(family) + "_h" + std::to_string(h) + "_w" + std::to_string(w) + ".json");
}

fs::path series_model_path(const ModelSpec& m, std::size_t h, std::size_t w,
                           const std::string& series_id) {
    const char* group = m.mode == TrainingMode::transfer ? "finetuned" : "scratch";
    return fs::path("models") / group / m.name() /
           ("h" + std::to_string(h) + "_w" + std::to_string(w)) /
           (sanitize_name(series_id) + ".json");
}

struct Context {
    const ExperimentConfig& config;
    const PipelineOptions& options;
    fs::path out;
    RunManifest& manifest;
    std::mutex failure_mutex;

    void log(const std::string& message) const {
        if (options.log) {
            options.log(message);
        }
    }
    [[nodiscard]] SplitOptions split() const {
        SplitOptions s;
        s.validation_length = config.validation_length;
        return s;
    }
};

/// Failures collected per task index so the manifest order is deterministic.
struct FailureSlots {
    explicit FailureSlots(std::size_t n) : slots(n) {}
    std::vector<std::optional<TaskFailure>> slots;

    void flush(RunManifest& manifest) const {
        for (const auto& f : slots) {
            if (f) {
                manifest.failures.push_back(*f);
            }
        }
    }
};

std::vector<TimeSeries> read_corpus_file(const fs::path& p) {
    return ingest_series_csv(p, SeriesFormat::m4).series;
}

std::vector<TimeSeries> materialize(const CorpusSource& src, const std::string& prefix,
                                    std::vector<RejectedSeries>& rejected) {
    if (src.path) {
        auto r = ingest_series_csv(*src.path, src.format);
        rejected.insert(rejected.end(), r.rejected.begin(), r.rejected.end());
        return std::move(r.series);
    }
    const auto& s = *src.synthetic;
    return synthetic::make_corpus(s.count, s.length, s.seed, prefix, s.families);
}

// ---------------------------------------------------------------------------

void stage_ingest(Context& ctx) {
    std::vector<RejectedSeries> rej_source;
    std::vector<RejectedSeries> rej_target;
    const auto source = materialize(ctx.config.source, "S", rej_source);
    const auto target = materialize(ctx.config.target, "T", rej_target);
    if (target.empty()) {
        throw InvalidArgument("target corpus has no usable series");
    }
    write_series_csv(ctx.out / kSourceCsv, source);
    write_series_csv(ctx.out / kTargetCsv, target);
    std::vector<csv::Row> rows;
    for (const auto& r : rej_source) {
        rows.push_back({"source", r.id, r.reason});
    }
    for (const auto& r : rej_target) {
        rows.push_back({"target", r.id, r.reason});
    }
    csv::write_file(ctx.out / kRejectedCsv, {"corpus", "series_id", "reason"}, rows);
    ctx.log("ingest: " + std::to_string(source.size()) + " source and " +
            std::to_string(target.size()) + " target series");
}

struct GlobalTask {
    Family family;
    std::size_t horizon;
    std::size_t input_size;
};

std::vector<GlobalTask> global_tasks(const ExperimentConfig& config) {
    std::vector<GlobalTask> tasks;
    for (const auto& m : config.models) {
        if (m.mode != TrainingMode::transfer) {
            continue;
        }
        for (const std::size_t h : config.horizons) {
            for (const std::size_t w : input_sizes_for_horizon(h)) {
                tasks.push_back({m.family, h, w});
            }
        }
    }
    return tasks;
}

void stage_pretrain(Context& ctx) {
    const auto tasks = global_tasks(ctx.config);
    if (tasks.empty()) {
        ctx.log("pretrain: no transfer models configured");
        return;
    }
    const auto source = read_corpus_file(ctx.out / kSourceCsv);
    if (source.empty()) {
        throw InvalidArgument("pretrain: source corpus is empty");
    }
    FailureSlots failures(tasks.size());
    parallel_for(tasks.size(), ctx.config.jobs, [&](std::size_t i) {
        const auto& t = tasks[i];
        const auto path = ctx.out / global_model_path(t.family, t.horizon, t.input_size);
        const std::string task = "global/" + to_string(t.family) + "/h" +
                                 std::to_string(t.horizon) + "/w" + std::to_string(t.input_size);
        try {
            if (ctx.options.resume && fs::exists(path)) {
                (void)load_model(path);
                return;
            }
            const auto corpus = assemble_source_corpus(source, t.input_size, t.horizon,
                                                       ctx.config.corpus_id, ctx.split());
            const auto config = ctx.config.forecaster_config(t.family, t.input_size, t.horizon);
            const auto seed = derive_seed(ctx.config.seed, "global", to_string(t.family),
                                          t.input_size, t.horizon);
            const auto global =
                pretrain_global(corpus, config, seed, ctx.config.training, ctx.config.grid);
            ModelArtifact a;
            a.forecaster = global.forecaster;
            a.provenance = {to_string(global.corpus), seed, global.epochs,
                            reproducible_timestamp()};
            fs::create_directories(path.parent_path());
            persist_model(path, a);
            ctx.log("pretrain: " + task + " epochs=" + std::to_string(global.epochs) +
                    " windows=" + std::to_string(corpus.train.size()) +
                    (corpus.skipped.empty()
                         ? std::string()
                         : " skipped=" + std::to_string(corpus.skipped.size())));
        } catch (const Error& e) {
            failures.slots[i] = TaskFailure{"pretrain", task, e.what()};
        }
    });
    failures.flush(ctx.manifest);
}

struct SeriesTask {
    std::size_t series;
    ModelSpec model;
    std::size_t horizon;
    std::size_t input_size;
};

std::vector<SeriesTask> neural_series_tasks(const ExperimentConfig& config,
                                            std::size_t series_count) {
    std::vector<SeriesTask> tasks;
    for (std::size_t s = 0; s < series_count; ++s) {
        for (const auto& m : config.models) {
            if (m.mode == TrainingMode::classical) {
                continue;
            }
            for (const std::size_t h : config.horizons) {
                for (const std::size_t w : input_sizes_for_horizon(h)) {
                    tasks.push_back({s, m, h, w});
                }
            }
        }
    }
    return tasks;
}

double validation_smape(const TrainedForecaster& f, const TimeSeries& ts,
                        const SeriesSplit& split) {
    std::vector<double> actual;
    std::vector<double> pred;
    const std::span<const double> values(ts.values);
    for (const std::size_t o : rolling_origins(split.validation, f.config.horizon)) {
        const auto p = f.forecast_at(values, o);
        for (std::size_t s = 0; s < p.size(); ++s) {
            actual.push_back(values[o + s]);
            pred.push_back(p[s]);
        }
    }
    return smape(actual, pred);
}

void stage_finetune(Context& ctx) {
    const auto targets = read_corpus_file(ctx.out / kTargetCsv);
    const auto tasks = neural_series_tasks(ctx.config, targets.size());

    // Global models are shared read-only inputs.
    std::map<std::tuple<Family, std::size_t, std::size_t>, GlobalModel> globals;
    for (const auto& g : global_tasks(ctx.config)) {
        const auto path = ctx.out / global_model_path(g.family, g.horizon, g.input_size);
        if (!fs::exists(path)) {
            continue;
        }
        auto a = load_model(path);
        GlobalModel gm;
        gm.forecaster = std::move(a.forecaster);
        gm.seed = a.provenance.seed;
        gm.epochs = a.provenance.epochs;
        globals.emplace(std::make_tuple(g.family, g.horizon, g.input_size), std::move(gm));
    }

    FailureSlots failures(tasks.size());
    std::vector<std::optional<ValidationScore>> scores(tasks.size());
    parallel_for(tasks.size(), ctx.config.jobs, [&](std::size_t i) {
        const auto& t = tasks[i];
        const auto& ts = targets[t.series];
        const auto path = ctx.out / series_model_path(t.model, t.horizon, t.input_size, ts.id);
        const std::string task = ts.id + "/" + t.model.name() + "/h" + std::to_string(t.horizon) +
                                 "/w" + std::to_string(t.input_size);
        try {
            const auto split = split_series(ts, ctx.split());
            std::optional<TrainedForecaster> model;
            if (ctx.options.resume && fs::exists(path)) {
                model = load_model(path).forecaster;
            } else {
                const auto seed = derive_seed(ctx.config.seed, ts.id, t.model.name(),
                                              t.input_size, t.horizon);
                ModelArtifact a;
                if (t.model.mode == TrainingMode::transfer) {
                    const auto it = globals.find({t.model.family, t.horizon, t.input_size});
                    if (it == globals.end()) {
                        throw InvalidArgument("global model unavailable");
                    }
                    a.forecaster = fine_tune_target(it->second, ts, ctx.config.fine_tune, seed,
                                                    ctx.split());
                } else {
                    const auto config =
                        ctx.config.forecaster_config(t.model.family, t.input_size, t.horizon);
                    a.forecaster =
                        fit_on_series(config, ts, split, seed, ctx.config.training, ctx.config.grid);
                }
                a.provenance = {"target:" + ts.id, seed,
                                a.forecaster.neural_state().metadata.epochs_run,
                                reproducible_timestamp()};
                fs::create_directories(path.parent_path());
                persist_model(path, a);
                model = std::move(a.forecaster);
            }
            scores[i] = ValidationScore{ts.id, t.model.name(), t.horizon, t.input_size,
                                        validation_smape(*model, ts, split)};
        } catch (const Error& e) {
            failures.slots[i] = TaskFailure{"finetune", task, e.what()};
        }
    });
    failures.flush(ctx.manifest);

    std::vector<csv::Row> rows;
    for (const auto& s : scores) {
        if (s) {
            rows.push_back({s->series_id, s->model, std::to_string(s->horizon),
                            std::to_string(s->input_size), csv::format_double(s->smape)});
        }
    }
    csv::write_file(ctx.out / kValidationCsv,
                    {"series_id", "model", "horizon", "input_size", "smape"}, rows);
    ctx.log("finetune: " + std::to_string(rows.size()) + " of " + std::to_string(tasks.size()) +
            " per-series networks trained");
}

std::vector<ValidationScore> read_validation(const fs::path& p) {
    std::vector<ValidationScore> out;
    const auto rows = csv::read_file(p);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        double v = 0.0;
        if (r.size() < 5 || !csv::parse_double(r[4], v)) {
            throw ParseError(p.string() + " line " + std::to_string(i + 1) + ": malformed row");
        }
        out.push_back({r[0], r[1], std::stoul(r[2]), std::stoul(r[3]), v});
    }
    return out;
}

void stage_evaluate(Context& ctx) {
    const auto targets = read_corpus_file(ctx.out / kTargetCsv);
    const auto& config = ctx.config;

    struct EvalTask {
        std::size_t series;
        ModelSpec model;
        std::size_t horizon;
        std::size_t input_size;
    };
    std::vector<EvalTask> tasks;
    for (std::size_t s = 0; s < targets.size(); ++s) {
        for (const auto& m : config.models) {
            for (const std::size_t h : config.horizons) {
                if (m.mode == TrainingMode::classical) {
                    tasks.push_back({s, m, h, 0});
                    continue;
                }
                for (const std::size_t w : input_sizes_for_horizon(h)) {
                    tasks.push_back({s, m, h, w});
                }
            }
        }
    }

    FailureSlots failures(tasks.size());
    std::vector<std::vector<EvaluationRecord>> per_task(tasks.size());
    parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
        const auto& t = tasks[i];
        const auto& ts = targets[t.series];
        const std::string task = ts.id + "/" + t.model.name() + "/h" + std::to_string(t.horizon) +
                                 (t.input_size > 0 ? "/w" + std::to_string(t.input_size) : "");
        try {
            TrainedForecaster f;
            if (t.model.mode == TrainingMode::classical) {
                const auto split = split_series(ts, ctx.split());
                f = fit_classical_forecaster(
                    t.model.family, std::span<const double>(ts.values).first(split.validation.end),
                    t.horizon);
            } else {
                const auto path =
                    ctx.out / series_model_path(t.model, t.horizon, t.input_size, ts.id);
                if (!fs::exists(path)) {
                    throw InvalidArgument("model artifact missing (training failed)");
                }
                f = load_model(path).forecaster;
            }
            per_task[i] = evaluate_forecaster_on_series(f, ts, t.horizon, t.model.name());
        } catch (const Error& e) {
            failures.slots[i] = TaskFailure{"evaluate", task, e.what()};
        }
    });
    failures.flush(ctx.manifest);

    std::vector<EvaluationRecord> records;
    for (auto& r : per_task) {
        records.insert(records.end(), r.begin(), r.end());
    }
    std::vector<EvaluationRecord> external;
    if (!config.external_forecasts.empty()) {
        std::vector<csv::Row> rejected;
        for (const auto& p : config.external_forecasts) {
            auto result = ingest_external_forecasts(p, targets);
            for (const auto& e : result.rejected) {
                rejected.push_back({p.filename().string(), std::to_string(e.line), e.message});
            }
            external.insert(external.end(), result.records.begin(), result.records.end());
        }
        csv::write_file(ctx.out / kExternalRejectedCsv, {"file", "line", "message"}, rejected);
        records.insert(records.end(), external.begin(), external.end());
    }
    write_records_csv(ctx.out / kRecordsCsv, records);

    // Input-size selection on validation sMAPE, only over complete candidate sets.
    std::vector<ValidationScore> validation;
    if (fs::exists(ctx.out / kValidationCsv)) {
        validation = read_validation(ctx.out / kValidationCsv);
    }
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<ValidationScore>>
        groups;
    for (const auto& v : validation) {
        groups[{v.series_id, v.model, v.horizon}].push_back(v);
    }
    std::vector<ValidationScore> complete;
    for (const auto& [key, scores] : groups) {
        if (scores.size() == input_sizes_for_horizon(std::get<2>(key)).size()) {
            complete.insert(complete.end(), scores.begin(), scores.end());
        } else {
            ctx.manifest.failures.push_back(
                {"evaluate",
                 std::get<0>(key) + "/" + std::get<1>(key) + "/h" +
                     std::to_string(std::get<2>(key)),
                 "input-size selection skipped: incomplete candidate set"});
        }
    }
    const auto selection = select_best_input_size(complete);
    std::set<std::tuple<std::string, std::string, std::size_t, std::size_t>> chosen;
    std::vector<csv::Row> sel_rows;
    for (const auto& c : selection.choices) {
        chosen.insert({c.series_id, c.model, c.horizon, c.input_size});
        sel_rows.push_back({c.series_id, c.model, std::to_string(c.horizon),
                            std::to_string(c.input_size), csv::format_double(c.smape)});
    }
    csv::write_file(ctx.out / kSelectionCsv,
                    {"series_id", "model", "horizon", "input_size", "validation_smape"}, sel_rows);
    std::vector<csv::Row> dist_rows;
    for (const auto& d : selection.distribution) {
        dist_rows.push_back({d.model, std::to_string(d.horizon), std::to_string(d.input_size),
                             std::to_string(d.count), csv::format_double(d.percent)});
    }
    csv::write_file(ctx.out / kDistributionCsv,
                    {"model", "horizon", "input_size", "count", "percent"}, dist_rows);

    std::vector<EvaluationRecord> selected;
    for (const auto& r : records) {
        if (r.input_size == 0 ||
            chosen.count({r.series_id, r.model, r.horizon, r.input_size}) > 0) {
            selected.push_back(r);
        }
    }
    std::vector<csv::Row> score_rows;
    for (const auto& s : score_per_series(selected)) {
        score_rows.push_back({s.series_id, s.model, std::to_string(s.horizon),
                              std::to_string(s.input_size), csv::format_double(s.mape),
                              csv::format_double(s.smape), std::to_string(s.count)});
    }
    csv::write_file(ctx.out / kScoresCsv,
                    {"series_id", "model", "horizon", "input_size", "mape", "smape", "records"},
                    score_rows);
    if (!selected.empty()) {
        write_summary_csv(ctx.out / kSummaryCsv, aggregate_performance_table(selected));
    }
    ctx.log("evaluate: " + std::to_string(records.size()) + " records (" +
            std::to_string(external.size()) + " external)");
}

void stage_features(Context& ctx) {
    const auto targets = read_corpus_file(ctx.out / kTargetCsv);
    std::vector<FeatureOutcome> outcomes(targets.size());
    parallel_for(targets.size(), ctx.config.jobs,
                 [&](std::size_t i) { outcomes[i] = compute_feature_vector(targets[i]); });
    std::vector<std::string> ids;
    std::vector<FeatureVector> features;
    std::vector<csv::Row> excluded;
    for (const auto& o : outcomes) {
        if (o.features) {
            ids.push_back(o.series_id);
            features.push_back(*o.features);
        }
        for (const auto& f : o.failures) {
            excluded.push_back({o.series_id, f.feature, f.message});
        }
    }
    write_features_csv(ctx.out / kFeaturesCsv, ids, features);
    csv::write_file(ctx.out / kExclusionsCsv, {"series_id", "feature", "message"}, excluded);
    ctx.log("features: " + std::to_string(ids.size()) + " series, " +
            std::to_string(excluded.size()) + " feature failures");
}

void stage_cluster(Context& ctx) {
    const auto rows = csv::read_file(ctx.out / kFeaturesCsv);
    std::vector<std::string> ids;
    PointMatrix raw;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ids.push_back(rows[i].at(0));
        std::vector<double> v;
        for (std::size_t j = 1; j < rows[i].size(); ++j) {
            double x = 0.0;
            if (!csv::parse_double(rows[i][j], x)) {
                throw ParseError("features.csv: malformed value on line " + std::to_string(i + 1));
            }
            v.push_back(x);
        }
        raw.push_back(std::move(v));
    }
    const auto& names = feature_names();
    const std::vector<std::string> name_list(names.begin(), names.end());
    // Columns constant across the corpus carry no distance information; leave them out.
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < name_list.size(); ++j) {
        const bool varies = std::any_of(raw.begin(), raw.end(),
                                        [&](const auto& row) { return row[j] != raw.front()[j]; });
        if (raw.empty() || varies) {
            keep.push_back(j);
        } else {
            ctx.manifest.failures.push_back(
                {"cluster", "feature/" + name_list[j], "excluded from clustering: zero variance"});
        }
    }
    PointMatrix kept(raw.size());
    std::vector<std::string> kept_names;
    for (const std::size_t j : keep) {
        kept_names.push_back(name_list[j]);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            kept[i].push_back(raw[i][j]);
        }
    }
    try {
        const auto z = standardize_features(kept, kept_names);
        const auto assignment = pam_cluster(z.values, ctx.config.cluster_k);
        write_assignment_csv(ctx.out / kAssignmentCsv, ids, assignment);
        write_profiles_csv(ctx.out / kProfilesCsv, name_list,
                           cluster_profiles(raw, assignment.labels, assignment.k));
        detail::Json quality = detail::Json::array();
        for (const std::size_t k : ctx.config.quality_k) {
            detail::Json q;
            q["k"] = k;
            try {
                const auto qa = cluster_quality(z.values, pam_cluster(z.values, k));
                q["silhouette"] = qa.silhouette;
                q["calinski_harabasz"] = qa.calinski_harabasz;
            } catch (const Error& e) {
                q["error"] = e.what();
            }
            quality.push_back(std::move(q));
        }
        write_text_file(ctx.out / kQualityJson, quality.dump(2) + "\n");
        ctx.log("cluster: k=" + std::to_string(ctx.config.cluster_k) + " over " +
                std::to_string(ids.size()) + " series");
    } catch (const Error& e) {
        ctx.manifest.failures.push_back({"cluster", "pam", e.what()});
    }
}

std::vector<SeriesScore> read_scores(const fs::path& p) {
    std::vector<SeriesScore> out;
    const auto rows = csv::read_file(p);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        SeriesScore s;
        if (r.size() < 7 || !csv::parse_double(r[4], s.mape) || !csv::parse_double(r[5], s.smape)) {
            throw ParseError(p.string() + " line " + std::to_string(i + 1) + ": malformed row");
        }
        s.series_id = r[0];
        s.model = r[1];
        s.horizon = std::stoul(r[2]);
        s.input_size = std::stoul(r[3]);
        s.count = std::stoul(r[6]);
        out.push_back(std::move(s));
    }
    return out;
}

void stage_rank(Context& ctx) {
    const auto scores = read_scores(ctx.out / kScoresCsv);
    std::map<std::string, std::size_t> cluster_of;
    if (fs::exists(ctx.out / kAssignmentCsv)) {
        const auto rows = csv::read_file(ctx.out / kAssignmentCsv);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            cluster_of[rows[i].at(0)] = std::stoul(rows[i].at(1));
        }
    }
    std::vector<RankingReport> reports;
    const auto emit = [&](const MetricMatrix& m, RankMetric metric, std::size_t h,
                          const std::string& scope, const fs::path& svg) {
        const std::string what = to_string(metric) + "/" + scope +
                                 (h > 0 ? "/h" + std::to_string(h) : std::string());
        try {
            auto r = rank_models(m, ctx.config.alpha);
            r.metric = to_string(metric);
            r.horizon = h;
            r.scope = scope;
            write_text_file(ctx.out / svg, render_cd_diagram_svg(r));
            reports.push_back(std::move(r));
        } catch (const Error& e) {
            ctx.manifest.failures.push_back({"rank", what, e.what()});
        }
    };
    for (const auto metric : {RankMetric::smape, RankMetric::mape}) {
        for (const std::size_t h : ctx.config.horizons) {
            emit(build_metric_matrix(scores, metric, h), metric, h, "all",
                 fs::path("figures") /
                     ("cd_" + to_string(metric) + "_h" + std::to_string(h) + ".svg"));
        }
        if (cluster_of.empty()) {
            continue;
        }
        // Per cluster, every (series, horizon) pair is one block.
        std::set<std::size_t> clusters;
        for (const auto& [id, c] : cluster_of) {
            clusters.insert(c);
        }
        for (const std::size_t c : clusters) {
            MetricMatrix pooled;
            for (const std::size_t h : ctx.config.horizons) {
                std::vector<SeriesScore> subset;
                for (const auto& s : scores) {
                    const auto it = cluster_of.find(s.series_id);
                    if (it != cluster_of.end() && it->second == c) {
                        subset.push_back(s);
                    }
                }
                auto m = build_metric_matrix(subset, metric, h);
                if (pooled.models.empty()) {
                    pooled.models = m.models;
                }
                if (m.models != pooled.models) {
                    continue;
                }
                for (std::size_t i = 0; i < m.series.size(); ++i) {
                    pooled.series.push_back(m.series[i] + "@h" + std::to_string(h));
                    pooled.values.push_back(m.values[i]);
                }
            }
            emit(pooled, metric, 0, "cluster" + std::to_string(c),
                 fs::path("figures") /
                     ("cd_" + to_string(metric) + "_cluster" + std::to_string(c) + ".svg"));
        }
    }
    write_text_file(ctx.out / kRankingJson, ranking_to_json(reports));
    ctx.log("rank: " + std::to_string(reports.size()) + " rankings");
}

void stage_report(Context& ctx) {
    ctx.manifest.mark_complete("report");
    write_text_file(ctx.out / kReportMd, render_report(ctx.config, ctx.manifest, ctx.out));
}

void run_stage(Stage stage, Context& ctx) {
    switch (stage) {
        case Stage::ingest:
            return stage_ingest(ctx);
        case Stage::pretrain:
            return stage_pretrain(ctx);
        case Stage::finetune:
            return stage_finetune(ctx);
        case Stage::evaluate:
            return stage_evaluate(ctx);
        case Stage::features:
            return stage_features(ctx);
        case Stage::cluster:
            return stage_cluster(ctx);
        case Stage::rank:
            return stage_rank(ctx);
        case Stage::report:
            return stage_report(ctx);
    }
}

void remove_temporaries(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        return;
    }
    std::vector<fs::path> stale;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".tmp") {
            stale.push_back(e.path());
        }
    }
    for (const auto& p : stale) {
        fs::remove(p);
    }
}

}  // namespace

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::ingest:
            return "ingest";
        case Stage::pretrain:
            return "pretrain";
        case Stage::finetune:
            return "finetune";
        case Stage::evaluate:
            return "evaluate";
        case Stage::features:
            return "features";
        case Stage::cluster:
            return "cluster";
        case Stage::rank:
            return "rank";
        case Stage::report:
            return "report";
    }
    return "unknown";
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages{Stage::ingest,   Stage::pretrain, Stage::finetune,
                                           Stage::evaluate, Stage::features, Stage::cluster,
                                           Stage::rank,     Stage::report};
    return stages;
}

Stage parse_stage(const std::string& name) {
    for (const auto s : all_stages()) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw InvalidArgument("unknown stage '" + name + "'");
}

std::vector<Stage> stage_prerequisites(Stage stage) {
    switch (stage) {
        case Stage::ingest:
        case Stage::report:
            return {};
        case Stage::pretrain:
        case Stage::features:
            return {Stage::ingest};
        case Stage::finetune:
            return {Stage::pretrain};
        case Stage::evaluate:
            return {Stage::finetune};
        case Stage::cluster:
            return {Stage::features};
        case Stage::rank:
            return {Stage::evaluate};
    }
    return {};
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    if (out.empty() || out == "." || out == "..") {
        out = "_" + out;
    }
    return out;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) {
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    const auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            guarded(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    guarded(i);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

RunManifest run_pipeline(const ExperimentConfig& config, const PipelineOptions& options) {
    const fs::path out = config.output_dir;
    fs::create_directories(out);
    remove_temporaries(out);
    const auto hash = config_hash(config);

    RunManifest manifest;
    if (auto previous = load_manifest(out)) {
        if (previous->config_hash == hash && inventory_matches(out, *previous)) {
            manifest = std::move(*previous);
        } else {
            for (const auto& f : previous->files) {
                fs::remove(out / f.path);
            }
            manifest = RunManifest{};
        }
    }
    manifest.config_hash = hash;

    std::vector<Stage> plan;
    if (options.stage) {
        std::vector<Stage> pending{*options.stage};
        std::set<Stage> needed;
        while (!pending.empty()) {
            const Stage s = pending.back();
            pending.pop_back();
            if (needed.insert(s).second) {
                for (const auto p : stage_prerequisites(s)) {
                    pending.push_back(p);
                }
            }
        }
        for (const auto s : all_stages()) {
            if (needed.count(s) > 0) {
                plan.push_back(s);
            }
        }
    } else {
        plan = all_stages();
    }

    Context ctx{config, options, out, manifest, {}};
    for (const auto stage : plan) {
        const auto name = to_string(stage);
        if (manifest.stage_complete(name)) {
            ctx.log(name + ": complete, skipped");
            continue;
        }
        manifest.clear_failures(name);
        std::erase(manifest.completed_stages, name);
        // Any recomputed stage makes an existing report stale.
        std::erase(manifest.completed_stages, to_string(Stage::report));
        try {
            run_stage(stage, ctx);
        } catch (const Error& e) {
            manifest.failures.push_back({name, "stage", e.what()});
            save_manifest(out, manifest);
            throw;
        }
        manifest.mark_complete(name);
        save_manifest(out, manifest);
    }
    return manifest;
}

}  // namespace tsforge
