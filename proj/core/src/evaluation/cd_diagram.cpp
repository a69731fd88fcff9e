#include "tsforge/evaluation/cd_diagram.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace tsforge {

namespace {

std::string escape_xml(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_cd_diagram_svg(const RankingReport& report) {
    const std::size_t k = report.models.size();
    const double width = 640.0;
    const double margin = 150.0;
    const double axis_y = 60.0;
    const double row_h = 18.0;
    const double max_rank = k > 1 ? static_cast<double>(k) : 2.0;
    const auto x_of = [&](double rank) {
        return margin + (rank - 1.0) / (max_rank - 1.0) * (width - 2.0 * margin);
    };
    const std::size_t left = (k + 1) / 2;
    const double labels_top = axis_y + 24.0 + 6.0 * static_cast<double>(report.groups.size());
    const double height = labels_top + row_h * static_cast<double>(left) + 20.0;

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<title>" << escape_xml(report.metric) << " h=" << report.horizon << ' '
      << escape_xml(report.scope) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"10\" y=\"16\" font-family=\"sans-serif\" font-size=\"11\">CD = "
      << num(report.critical_difference) << " (alpha " << num(report.alpha)
      << ", N = " << report.series_count << ")</text>\n";

    // Critical-difference reference bar.
    s << "<line class=\"cd\" x1=\"" << num(x_of(1.0)) << "\" y1=\"30\" x2=\""
      << num(x_of(1.0 + report.critical_difference)) << "\" y2=\"30\" stroke=\"black\" "
      << "stroke-width=\"2\"/>\n";

    s << "<line class=\"axis\" x1=\"" << num(x_of(1.0)) << "\" y1=\"" << num(axis_y)
      << "\" x2=\"" << num(x_of(max_rank)) << "\" y2=\"" << num(axis_y)
      << "\" stroke=\"black\"/>\n";
    for (std::size_t r = 1; r <= static_cast<std::size_t>(max_rank); ++r) {
        const double x = x_of(static_cast<double>(r));
        s << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y - 5) << "\" x2=\"" << num(x)
          << "\" y2=\"" << num(axis_y) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(x) << "\" y=\"" << num(axis_y - 8)
          << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << r
          << "</text>\n";
    }

    for (std::size_t i = 0; i < k; ++i) {
        const double x = x_of(report.mean_ranks[i]);
        const bool on_left = i < left;
        const std::size_t slot = on_left ? i : k - 1 - i;
        const double y = labels_top + row_h * static_cast<double>(slot);
        const double text_x = on_left ? margin - 10.0 : width - margin + 10.0;
        s << "<polyline class=\"model-tick\" fill=\"none\" stroke=\"black\" points=\"" << num(x)
          << ',' << num(axis_y) << ' ' << num(x) << ',' << num(y) << ' ' << num(text_x) << ','
          << num(y) << "\"/>\n"
          << "<text x=\"" << num(on_left ? text_x - 3.0 : text_x + 3.0) << "\" y=\""
          << num(y + 4.0) << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\""
          << (on_left ? "end" : "start") << "\">" << escape_xml(report.models[i]) << " ("
          << num(report.mean_ranks[i]) << ")</text>\n";
    }

    std::size_t gi = 0;
    for (const auto& group : report.groups) {
        double lo = max_rank;
        double hi = 1.0;
        for (const auto& name : group) {
            for (std::size_t i = 0; i < k; ++i) {
                if (report.models[i] == name) {
                    lo = std::min(lo, report.mean_ranks[i]);
                    hi = std::max(hi, report.mean_ranks[i]);
                }
            }
        }
        const double y = axis_y + 12.0 + 6.0 * static_cast<double>(gi);
        s << "<line class=\"group\" x1=\"" << num(x_of(lo) - 4.0) << "\" y1=\"" << num(y)
          << "\" x2=\"" << num(x_of(hi) + 4.0) << "\" y2=\"" << num(y)
          << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
        ++gi;
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace tsforge
