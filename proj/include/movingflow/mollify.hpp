#pragma once

#include <vector>

#include "movingflow/mesh.hpp"
#include "movingflow/report.hpp"

namespace mf {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int n);

// rho^{-1} phi(y / rho) with phi(s) = c exp(-1/(1-s^2)) on |s| < 1.
struct BumpKernel {
  double rho = 1.0;
  double normalization = 1.0;

  double operator()(double y) const;
  double peak() const { return (*this)(0.0); }
};

BumpKernel make_kernel(double rho);
// int |s| phi(s) ds for the unit kernel.
double kernel_first_moment();

Interval shrink_domain(Interval interval, double delta);

// (u * kernel)(x) at a single point; reads u only on [x - rho, x + rho].
double convolve_at(const Field& field, const BumpKernel& kernel, double x);
Field convolve_interior(const Field& field, const BumpKernel& kernel, double delta);

// e(rho) = ||u * kernel_rho - u||_{L^p(Q_T^delta)} against rho M1 ||u'||_{L^p(Q_T)}.
EstimateReport mollify_convergence_audit(const SpaceTimeField& field, double p, double delta,
                                         const std::vector<double>& rho_grid);

}  // namespace mf
