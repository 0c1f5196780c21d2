#pragma once

#include <string>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/geometry.hpp"
#include "dyad/segmentation.hpp"

namespace dyad {

// Self-contained SVG renderers.  Output is deterministic: fixed canvas,
// fixed palette, coordinates printed with three decimals.

void render_power_svg(const std::string& path, const std::vector<PowerSample>& samples,
                      const std::vector<ActionSegment>& segments);

void render_projected_svg(const std::string& path, const std::vector<PowerSample>& samples,
                          int goal_count, const std::vector<ActionSegment>& segments);

void render_embedding_svg(const std::string& path, const std::vector<Vec2>& points,
                          const std::vector<int>& labels);

}  // namespace dyad
