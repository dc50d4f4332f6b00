#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specproj/errors.hpp"

namespace specproj {

struct Quad1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
Quad1D gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
Quad1D gauss_legendre_ab(int n, double a, double b);

/// Generalized Gauss-Laguerre rule: integrates f against x^alpha e^{-x} on [0, inf).
Quad1D gauss_laguerre(int n, double alpha = 0.0);

/// Quadrature rule for the unit sphere S^{r-1} with surface measure.
/// r=1 is the two-point counting measure on {+-1}; r=2 a trapezoid rule on
/// the circle; r=3 Gauss-Legendre (polar cosine) x trapezoid (azimuth);
/// r=4 a product rule in double-angle coordinates.
class SphereRule {
  public:
    /// base_order sets the azimuthal count; other factors are derived from it.
    SphereRule(int r, int base_order);

    int r() const { return r_; }
    int size() const { return static_cast<int>(weights_.size()); }
    const std::vector<Eigen::VectorXd>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight_sum() const { return weight_sum_; }

    /// Surface area of S^{r-1}.
    static double surface_area(int r);

    /// Exact moment of the monomial prod tau_i^{alpha_i} over S^{r-1}.
    static double monomial_moment(const std::vector<int>& alpha);

    /// Check the rule integrates all spherical monomials up to the given
    /// total degree within tol * surface_area; throws QuadratureNotConverged
    /// on failure.
    void validate_degree(int degree, double tol = 1e-12) const;

  private:
    int r_;
    std::vector<Eigen::VectorXd> nodes_;
    std::vector<double> weights_;
    double weight_sum_ = 0.0;
};

} // namespace specproj
