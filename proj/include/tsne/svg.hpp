#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tsne/core.hpp"

namespace tsne {

/// Deterministic 800x800 scatter plot of a 2-column matrix: 5% margin,
/// equal-aspect axes, point radius 2. When color values are supplied they are
/// mapped through an 8-stop viridis ramp over their min-max range; otherwise
/// all points share one color. Identical input yields byte-identical output.
std::string render_scatter_svg(const Matrix& y, const std::vector<double>& color = {});

void write_scatter_svg(const std::filesystem::path& path, const Matrix& y,
                       const std::vector<double>& color = {});

}  // namespace tsne
