#pragma once

#include <string>
#include <vector>

#include "movingflow/mesh.hpp"

namespace mf {

struct TrendSeries {
  std::string label;
  std::vector<double> x, y;
};

// u(., t) at `count` evenly spaced stored levels with the moving interval outlined underneath.
std::string svg_field_snapshots(const SpaceTimeField& field, int count = 5);
// Log-log curves with the least-squares slope of each series in the legend.
std::string svg_trend(const std::vector<TrendSeries>& series, const std::string& xlabel, const std::string& ylabel);
// Space-time cells shaded by band membership: B_n light, E_n dark.
std::string svg_bands(const SpaceTimeField& field, int n);

}  // namespace mf
