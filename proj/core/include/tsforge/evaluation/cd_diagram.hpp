#pragma once

#include <string>

#include "tsforge/evaluation/ranking.hpp"

namespace tsforge {

/// Standalone SVG: rank axis 1..k, one labelled tick per model and one
/// horizontal bar (class "group") per group of indistinguishable models.
[[nodiscard]] std::string render_cd_diagram_svg(const RankingReport& report);

}  // namespace tsforge
