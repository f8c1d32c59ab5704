#pragma once

#include <cmath>
#include <vector>

#include "movingflow/errors.hpp"
#include "movingflow/mesh.hpp"

namespace mf {

namespace detail {
template <class S>
void require_level(S k) {
  if (!(k > S(0))) throw ParameterError("truncation level must be positive");
}
inline void require_band(int n) {
  if (n < 0) throw ParameterError("band index must be nonnegative");
}
}  // namespace detail

template <class S>
S T_k(S k, S z) {
  detail::require_level(k);
  return z > k ? k : (z < -k ? -k : z);
}

template <class S>
S S_k(S k, S z) {
  detail::require_level(k);
  const S a = std::abs(z);
  return a <= k ? S(0.5) * z * z : k * a - S(0.5) * k * k;
}

// Odd band ramp: sign(z) * clamp(|z| - n, 0, 1).
template <class S>
S phi_n(int n, S z) {
  detail::require_band(n);
  const S r = std::abs(z) - S(n);
  const S c = r < S(0) ? S(0) : (r > S(1) ? S(1) : r);
  return z < S(0) ? -c : c;
}

template <class S>
S Psi_n(int n, S z) {
  detail::require_band(n);
  const S a = std::abs(z);
  if (a <= S(n)) return S(0);
  if (a <= S(n + 1)) return S(0.5) * (a - S(n)) * (a - S(n));
  return a - S(n) - S(0.5);
}

struct BandDecomposition {
  int n = 0;
  std::vector<char> B_mask;  // n <= |u| <= n+1
  std::vector<char> E_mask;  // |u| > n+1
  double B_measure = 0.0;
  double E_measure = 0.0;
};

inline bool in_band(int n, double u) {
  const double a = std::abs(u);
  return a >= n && a <= n + 1;
}
inline bool above_band(int n, double u) { return std::abs(u) > n + 1; }

// Masks follow the for_each_point ordering of the field's quadrature points.
BandDecomposition band_decompose(const SpaceTimeField& field, int n, TimeRule rule = TimeRule::BackwardEuler);
BandDecomposition band_decompose(const Field& field, int n);

}  // namespace mf
