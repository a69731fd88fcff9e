// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tsforge/analysis/clustering.hpp"
#include "tsforge/analysis/features.hpp"
#include "tsforge/autodiff/gradcheck.hpp"
#include "tsforge/autodiff/ops.hpp"
#include "tsforge/common/csv.hpp"
#include "tsforge/common/rng.hpp"
#include "tsforge/dataset.hpp"
#include "tsforge/evaluation/metrics.hpp"
#include "tsforge/evaluation/ranking.hpp"
#include "tsforge/evaluation/records.hpp"
#include "tsforge/forecasters/forecaster.hpp"
#include "tsforge/harness/artifact.hpp"
#include "tsforge/harness/experiment_config.hpp"
#include "tsforge/harness/pipeline.hpp"
#include "tsforge/synthetic.hpp"
#include "tsforge/transfer/transfer.hpp"

namespace fs = std::filesystem;
using namespace tsforge;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<double> uniform_window(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.uniform(lo, hi);
    }
    return v;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = sd * rng.normal();
    }
    return v;
}

std::vector<double> seasonal(std::size_t n, std::uint64_t seed, double amplitude, double sd) {
    auto v = noise(n, seed, sd);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] += 50.0 + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0);
    }
    return v;
}

ForecasterConfig reduced_width(Family family) {
    // Default depth, kernels and dilations; only the widths shrink.
    ForecasterConfig c;
    c.family = family;
    c.input_size = 12;
    c.horizon = 3;
    c.cnn.filters = {4, 4};
    c.lstm.units = 12;
    c.tcn.filters = 4;
    return c;
}

Outcome criterion1() {
    const auto start = Clock::now();
    std::ostringstream detail;
    bool pass = true;
    for (const Family f : {Family::cnn, Family::lstm, Family::tcn}) {
        NeuralNetwork net(reduced_width(f), 17, GridPolicy::relaxed);
        Rng rng(5);
        const auto x = uniform_window(rng, 12, 0.1, 1.1);
        const auto y = uniform_window(rng, 3, 0.1, 1.1);
        const ad::LossBuilder build = [&](ad::Tape& tape, const ad::ParameterSet& ps) {
            return ad::mape_loss(tape, net.forward(tape, ps, x), ad::Tensor::vector(y));
        };
        const auto report = ad::gradient_check(build, net.parameters(), 1e-4);
        const auto params = net.parameters().scalar_count();
        pass = pass && report.passed && report.max_relative_error < 1e-4 && params <= 10000;
        detail << to_string(f) << " params=" << params << " max_rel=" << fmt(report.max_relative_error)
               << "; ";
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 60.0;
    detail << "time=" << fmt(elapsed) << "s";
    return {pass, detail.str()};
}

Outcome criterion2() {
    const auto sources = synthetic::make_corpus(8, 120, 31);
    const auto targets = synthetic::make_corpus(4, 120, 32, "T");
    std::ostringstream detail;
    bool pass = true;
    std::size_t compared = 0;
    std::size_t heads_moved = 0;
    for (const Family f : {Family::cnn, Family::lstm, Family::tcn}) {
        ForecasterConfig cfg;
        cfg.family = f;
        cfg.input_size = 12;
        cfg.horizon = 3;
        EarlyStopPolicy quick;
        quick.max_epochs = 1;
        const auto corpus = assemble_source_corpus(sources, 12, 3);
        const auto global = pretrain_global(corpus, cfg, 3, quick);
        FineTunePolicy policy;
        // Well below each family's pre-training rate, large enough to move the head.
        policy.learning_rate = 0.5 * cfg.learning_rate();
        policy.max_epochs = 3;
        const auto& before = global.forecaster.neural_state().network.parameters();
        for (const auto& target : targets) {
            const auto tuned = fine_tune_target(global, target, policy, 9);
            const auto& after = tuned.neural_state().network.parameters();
            bool moved = false;
            for (const auto& name : before.names()) {
                const bool head = name.rfind("head.", 0) == 0;
                const bool same = after.value(name).bit_identical(before.value(name));
                if (head) {
                    moved = moved || !same;
                } else {
                    ++compared;
                    if (!same) {
                        pass = false;
                        detail << "changed " << to_string(f) << ":" << name << "; ";
                    }
                }
            }
            heads_moved += moved ? 1 : 0;
        }
    }
    detail << compared << " frozen tensors bit-identical over 3 families x 4 targets; heads adapted in "
           << heads_moved << "/12 fine-tunes";
    return {pass, detail.str()};
}

Outcome criterion3() {
    std::vector<double> v(120);
    for (std::size_t t = 0; t < v.size(); ++t) {
        v[t] = 1.0 + static_cast<double>(t);
    }
    const auto split = split_series(TimeSeries{"X", v});
    std::ostringstream detail;
    bool pass = split.test.size() == 18;
    const std::map<std::size_t, std::size_t> expected{{1, 18}, {3, 16}, {6, 13}, {12, 7}};
    for (const auto& [h, n] : expected) {
        for (const std::size_t w : input_sizes_for_horizon(h)) {
            const auto got = make_supervised_windows(v, w, h, split.test).size();
            pass = pass && got == n;
        }
        const auto origins = rolling_origins(split.test, h).size();
        pass = pass && origins == n;
        detail << "h=" << h << ":" << origins << " ";
    }
    return {pass, detail.str()};
}

Outcome criterion4() {
    const std::map<std::size_t, std::vector<std::size_t>> expected{
        {1, {3, 12}}, {3, {3, 4, 12}}, {6, {6, 8, 12}}, {12, {12, 15}}};
    bool pass = true;
    std::ostringstream detail;
    for (const auto& [h, sizes] : expected) {
        const auto got = input_sizes_for_horizon(h);
        pass = pass && got == sizes;
        detail << "h=" << h << ":{";
        for (std::size_t i = 0; i < got.size(); ++i) {
            detail << (i ? "," : "") << got[i];
        }
        detail << "} ";
    }
    return {pass, detail.str()};
}

Outcome criterion5() {
    const std::vector<double> a{100.0};
    const double m = mape(a, std::vector<double>{110.0});
    const double s = smape(a, std::vector<double>{300.0});
    bool pass = std::abs(m - 0.10) <= 1e-12 && std::abs(s - 0.5) <= 1e-12;
    Rng rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto y = uniform_window(rng, 18, 1.0, 50.0);
        const auto f = uniform_window(rng, 18, 1.0, 50.0);
        const double m0 = mape(y, f);
        const double s0 = smape(y, f);
        for (const double c : {1e-3, 1.0, 1e6}) {
            auto yc = y;
            auto fc = f;
            for (auto& v : yc) {
                v *= c;
            }
            for (auto& v : fc) {
                v *= c;
            }
            worst = std::max({worst, std::abs(mape(yc, fc) - m0), std::abs(smape(yc, fc) - s0)});
        }
    }
    pass = pass && worst <= 1e-12;
    return {pass, "mape=" + fmt(m) + " smape=" + fmt(s) + " max scale drift=" + fmt(worst)};
}

Outcome criterion6() {
    const std::vector<std::vector<double>> tied(6, std::vector<double>(4, 0.25));
    const double t = friedman_statistic(tied).statistic;
    const std::vector<std::vector<double>> strict{
        {0.1, 0.2, 0.3}, {0.4, 0.5, 0.9}, {0.01, 0.02, 0.03}, {1.0, 2.0, 3.0}};
    // Mean ranks 1, 2, 3: 12 * 4 / (3 * 4) * ((1 - 2)^2 + (3 - 2)^2) = 8.
    const double s = friedman_statistic(strict).statistic;
    const double cd = nemenyi_critical_difference(10, 1000, 0.05);
    const double cd_expected = 3.164 * std::sqrt(110.0 / 6000.0);
    const bool pass = t == 0.0 && std::abs(s - 8.0) <= 1e-9 && std::abs(cd - cd_expected) <= 1e-6;
    return {pass, "tied=" + fmt(t) + " strict=" + fmt(s) + " cd=" + fmt(cd)};
}

double medoid_cost(const PointMatrix& p, const std::vector<std::size_t>& medoids) {
    double total = 0.0;
    for (const auto& x : p) {
        double best = std::numeric_limits<double>::infinity();
        for (const std::size_t m : medoids) {
            best = std::min(best, euclidean(x, p[m]));
        }
        total += best;
    }
    return total;
}

double exhaustive_optimum(const PointMatrix& p, std::size_t k) {
    std::vector<bool> pick(p.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (pick[i]) {
                m.push_back(i);
            }
        }
        best = std::min(best, medoid_cost(p, m));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

Outcome criterion7() {
    const auto start = Clock::now();
    Rng rng(2024);
    int optimal = 0;
    std::ostringstream gaps;
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t n = 5 + rng.below(8);
        const std::size_t k = 2 + rng.below(2);
        PointMatrix p(n, std::vector<double>(3));
        for (auto& row : p) {
            for (auto& v : row) {
                v = rng.normal();
            }
        }
        const double pam = pam_cluster(p, k).total_cost;
        const double best = exhaustive_optimum(p, k);
        if (pam <= best + 1e-9 * std::max(1.0, best)) {
            ++optimal;
        } else {
            gaps << " instance " << instance << " (n=" << n << ",k=" << k
                 << ") gap=" << fmt(pam - best);
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = optimal >= 48 && elapsed < 10.0;
    return {pass, std::to_string(optimal) + "/50 optimal, time=" + fmt(elapsed) + "s" + gaps.str()};
}

Outcome criterion8() {
    constexpr std::size_t kEntropyLength = 400;
    constexpr std::size_t kLength = 500;
    int noise_entropy = 0;
    int sine_entropy = 0;
    int season = 0;
    int rw_adf = 0;
    int noise_adf = 0;
    int ar_q = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        noise_entropy += spectral_entropy(noise(kEntropyLength, seed)) > 0.9 ? 1 : 0;
        sine_entropy += spectral_entropy(seasonal(kEntropyLength, seed, 10.0, 0.5)) < 0.3 ? 1 : 0;
        season += seasonal_strength(seasonal(240, seed, 10.0, 0.5)) > 0.99 ? 1 : 0;
        const auto steps = noise(kLength, seed);
        std::vector<double> rw(kLength);
        double level = 0.0;
        for (std::size_t t = 0; t < kLength; ++t) {
            level += steps[t];
            rw[t] = level;
        }
        rw_adf += adf_pvalue(rw) > 0.10 ? 1 : 0;
        noise_adf += adf_pvalue(noise(kLength, 1000 + seed)) < 0.01 ? 1 : 0;
        const auto e = noise(kLength + 100, 2000 + seed);
        std::vector<double> ar(kLength);
        double x = 0.0;
        for (std::size_t t = 0; t < e.size(); ++t) {
            x = 0.9 * x + e[t];
            if (t >= 100) {
                ar[t - 100] = x;
            }
        }
        ar_q += box_pierce(ar) > 200.0 ? 1 : 0;
    }
    const bool pass = noise_entropy == 20 && sine_entropy == 20 && season == 20 && rw_adf >= 18 &&
                      noise_adf >= 18 && ar_q == 20;
    std::ostringstream d;
    d << "noise entropy " << noise_entropy << "/20, sinusoid entropy " << sine_entropy
      << "/20, seasonal strength " << season << "/20, random-walk ADF " << rw_adf
      << "/20, noise ADF " << noise_adf << "/20, AR(1) Q " << ar_q << "/20";
    return {pass, d.str()};
}

ExperimentConfig smoke_config(const fs::path& out) {
    auto c = parse_experiment_config(R"({
      "source": {"synthetic": {"count": 40, "length": 120, "seed": 101,
                               "families": ["seasonal", "noisy"]}},
      "target": {"synthetic": {"count": 10, "length": 120, "seed": 202,
                               "families": ["seasonal", "noisy"]}},
      "horizons": [3],
      "models": [{"family": "tcn", "mode": "transfer"}, {"family": "tcn", "mode": "scratch"},
                 {"family": "theta"}, {"family": "seasonal_naive"}],
      "seed": 42
    })", out.parent_path());
    c.output_dir = out;
    return c;
}

struct SmokeRun {
    RunManifest manifest;
    double seconds = 0.0;
};

Outcome criterion9(const fs::path& root, SmokeRun& run) {
    const auto cfg = smoke_config(root / "run1");
    const auto start = Clock::now();
    run.manifest = run_pipeline(cfg);
    run.seconds = seconds_since(start);

    std::vector<std::string> missing;
    for (const char* f : {"report.md", "summary.csv", "scores.csv", "records.csv",
                          "validation.csv", "input_size_selection.csv",
                          "input_size_distribution.csv", "features.csv", "assignment.csv",
                          "profiles.csv", "cluster_quality.json", "ranking.json",
                          "figures/cd_smape_h3.svg", "figures/cd_mape_h3.svg", "manifest.json"}) {
        if (!fs::exists(cfg.output_dir / f)) {
            missing.emplace_back(f);
        }
    }
    std::map<std::string, std::map<std::string, double>> smape_by;
    const auto rows = csv::read_file(cfg.output_dir / "scores.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double v = 0.0;
        if (csv::parse_double(rows[i][5], v)) {
            smape_by[rows[i][0]][rows[i][1]] = v;
        }
    }
    int wins = 0;
    int compared = 0;
    for (const auto& [series, models] : smape_by) {
        const auto a = models.find("tcn_transfer");
        const auto b = models.find("tcn_scratch");
        if (a != models.end() && b != models.end()) {
            ++compared;
            wins += a->second <= b->second ? 1 : 0;
        }
    }
    const bool complete = run.manifest.completed_stages.size() == all_stages().size();
    const bool pass = complete && missing.empty() && run.seconds < 600.0 && compared == 10 &&
                      wins >= 6;
    std::ostringstream d;
    d << "time=" << fmt(run.seconds) << "s, stages " << run.manifest.completed_stages.size() << "/"
      << all_stages().size() << ", fine-tuned <= scratch on " << wins << "/" << compared
      << " targets";
    for (const auto& m : missing) {
        d << ", missing " << m;
    }
    return {pass, d.str()};
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

Outcome criterion10(const fs::path& root, const SmokeRun& first) {
    const auto second = run_pipeline(smoke_config(root / "run2"));
    const bool same_files = !first.manifest.files.empty() && first.manifest.files == second.files;

    const auto series = synthetic::make_corpus(1, 120, 7, "A")[0];
    ForecasterConfig cfg;
    cfg.family = Family::tcn;
    cfg.input_size = 12;
    cfg.horizon = 3;
    EarlyStopPolicy policy;
    policy.max_epochs = 3;
    ModelArtifact artifact;
    artifact.forecaster = fit_on_series(cfg, series, split_series(series), 5, policy);
    artifact.provenance = {"target:A1", 5, 3, reproducible_timestamp()};
    persist_model(root / "artifact.json", artifact);
    const auto loaded = load_model(root / "artifact.json");
    Rng rng(10);
    int identical = 0;
    for (int i = 0; i < 100; ++i) {
        const auto w = uniform_window(rng, 12, 50.0, 150.0);
        identical += bit_equal(predict_network(artifact.forecaster, w),
                               predict_network(loaded.forecaster, w))
                         ? 1
                         : 0;
    }
    const bool pass = same_files && identical == 100;
    std::ostringstream d;
    d << "repeat run " << (same_files ? "identical" : "differs") << " over "
      << first.manifest.files.size() << " files; artifact round-trip " << identical
      << "/100 windows bit-exact";
    return {pass, d.str()};
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / ("tsforge-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    SmokeRun smoke;
    const std::vector<std::function<Outcome()>> criteria{
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7,
        criterion8, [&] { return criterion9(root, smoke); },
        [&] { return criterion10(root, smoke); }};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %zu: %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    fs::remove_all(root);
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
