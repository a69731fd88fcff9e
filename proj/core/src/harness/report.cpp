#include "tsforge/harness/report.hpp"

#include <algorithm>
#include <sstream>

#include "tsforge/common/csv.hpp"

namespace fs = std::filesystem;

namespace tsforge {

namespace {

void csv_table(std::ostringstream& out, const fs::path& path) {
    if (!fs::exists(path)) {
        out << "_" << path.filename().string() << " not found._\n\n";
        return;
    }
    const auto rows = csv::read_file(path);
    if (rows.size() < 2) {
        out << "_No rows._\n\n";
        return;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << "|";
        for (const auto& cell : rows[i]) {
            out << " " << cell << " |";
        }
        out << "\n";
        if (i == 0) {
            out << "|";
            for (std::size_t j = 0; j < rows[0].size(); ++j) {
                out << "---|";
            }
            out << "\n";
        }
    }
    out << "\n";
}

bool section(std::ostringstream& out, const RunManifest& manifest, const std::string& title,
             const std::string& stage) {
    out << "## " << title << "\n\n";
    if (!manifest.stage_complete(stage)) {
        out << "_not run (stage `" << stage << "` has not completed)._\n\n";
        return false;
    }
    return true;
}

}  // namespace

std::string render_report(const ExperimentConfig& config, const RunManifest& manifest,
                          const fs::path& output_dir) {
    std::ostringstream out;
    out << "# tsforge run report\n\n";
    out << "- config hash: `" << manifest.config_hash << "`\n";
    out << "- seed: " << config.seed << "\n";
    out << "- models:";
    for (const auto& m : config.models) {
        out << " " << m.name();
    }
    out << "\n- horizons:";
    for (const auto h : config.horizons) {
        out << " " << h;
    }
    out << "\n- completed stages:";
    for (const auto& s : manifest.completed_stages) {
        out << " " << s;
    }
    out << "\n\n";

    if (section(out, manifest, "Forecast accuracy", "evaluate")) {
        out << "Two-stage means over the test block (per-series mean, then mean over "
               "series). sMAPE uses the denominator |y| + |ŷ| without a factor of 2, so it lies in [0, 1].\n\n";
        csv_table(out, output_dir / "summary.csv");
    }
    if (section(out, manifest, "Input-size distribution", "evaluate")) {
        out << "Input size chosen per series by validation sMAPE.\n\n";
        csv_table(out, output_dir / "input_size_distribution.csv");
    }
    if (section(out, manifest, "Cluster profiles", "cluster")) {
        csv_table(out, output_dir / "profiles.csv");
        const auto q = output_dir / "cluster_quality.json";
        if (fs::exists(q)) {
            out << "Cluster quality by k: see `cluster_quality.json`.\n\n";
        }
    }
    if (section(out, manifest, "Critical difference diagrams", "rank")) {
        const auto dir = output_dir / "figures";
        if (fs::is_directory(dir)) {
            std::vector<std::string> names;
            for (const auto& e : fs::directory_iterator(dir)) {
                if (e.path().extension() == ".svg") {
                    names.push_back(e.path().filename().string());
                }
            }
            std::sort(names.begin(), names.end());
            for (const auto& n : names) {
                out << "- [" << n << "](figures/" << n << ")\n";
            }
            out << "\n";
        }
    }
    out << "## Notes\n\n";
    out << "- Input size is selected on the validation block, never on the test block.\n";
    out << "- Outliers are counted with a median absolute deviation rule (more than 3 scaled MADs from the median of the remainder).\n";
    out << "- Per-cluster rankings treat every (series, horizon) pair as one block.\n\n";

    out << "## Failures\n\n";
    if (manifest.failures.empty()) {
        out << "None.\n";
    } else {
        out << "| stage | task | message |\n|---|---|---|\n";
        for (const auto& f : manifest.failures) {
            std::string msg = f.message;
            for (auto& c : msg) {
                if (c == '|' || c == '\n') {
                    c = ' ';
                }
            }
            out << "| " << f.stage << " | " << f.task << " | " << msg << " |\n";
        }
    }
    return out.str();
}

}  // namespace tsforge
