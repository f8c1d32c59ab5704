#include "movingflow/truncation.hpp"

namespace mf {

namespace {
void classify(BandDecomposition& b, double u, double w) {
  const bool in = in_band(b.n, u);
  const bool above = above_band(b.n, u);
  b.B_mask.push_back(in);
  b.E_mask.push_back(above);
  if (in) b.B_measure += w;
  if (above) b.E_measure += w;
}
}  // namespace

BandDecomposition band_decompose(const SpaceTimeField& field, int n, TimeRule rule) {
  detail::require_band(n);
  BandDecomposition b;
  b.n = n;
  for_each_point(field, [&](const QuadPoint& q) { classify(b, q.u, q.weight); }, rule);
  return b;
}

BandDecomposition band_decompose(const Field& field, int n) {
  detail::require_band(n);
  BandDecomposition b;
  b.n = n;
  for (int e = 0; e < field.mesh.elements(); ++e)
    for (int g = 0; g < 3; ++g) classify(b, field.at_gauss(e, g), field.mesh.gauss_w(e, g));
  return b;
}

}  // namespace mf
