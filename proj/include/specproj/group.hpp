#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "specproj/errors.hpp"

namespace specproj {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A point (y, t) of the group, y in R^{2n} horizontal, t in R^r central.
struct GroupPoint {
    Vector y;
    Vector t;
};

/// A step-two nilpotent group defined by r skew-symmetric 2n x 2n matrices.
///
/// Multiplication: (x,t)(y,s) = (x+y, t+s+2B(x,y)) with
/// B(x,y)_beta = x^T B^beta y. Non-degeneracy (B^tau invertible for every
/// tau != 0) is checked numerically over a sample of directions at
/// construction; the observed extremes are kept for downstream use.
class GroupDescriptor {
  public:
    int n() const { return n_; }
    int r() const { return r_; }
    int horizontal_dim() const { return 2 * n_; }
    /// Homogeneous dimension Q = 2n + 2r.
    int homogeneous_dim() const { return 2 * n_ + 2 * r_; }
    const std::vector<Matrix>& tensors() const { return B_; }
    const Matrix& tensor(int beta) const { return B_.at(beta); }

    /// Smallest singular value of B^tau seen over the validation sample.
    double sigma_min() const { return sigma_min_; }
    /// Eigenvalue range [a, b] of (B^tau)^T B^tau over unit tau samples.
    double btb_eig_min() const { return btb_min_; }
    double btb_eig_max() const { return btb_max_; }
    double threshold() const { return threshold_; }

    /// B(x, y) componentwise: beta -> x^T B^beta y.
    Vector bilinear(const Vector& x, const Vector& y) const;

    friend GroupDescriptor validate_group(int n, int r, const std::vector<Matrix>& B_list,
                                          double sigma_min_threshold, std::uint64_t seed);

  private:
    GroupDescriptor() = default;
    int n_ = 0, r_ = 0;
    std::vector<Matrix> B_;
    double sigma_min_ = 0.0;
    double btb_min_ = 0.0;
    double btb_max_ = 0.0;
    double threshold_ = 0.0;
};

/// Validate shapes, exact skew-symmetry, and sampled non-degeneracy.
/// Sample plan: r=1 checks tau=+-1; r=2 checks 360 equispaced circle
/// directions; r>=3 checks a symmetric frame of 2r(r+1) directions plus 1000
/// seeded uniform directions.
GroupDescriptor validate_group(int n, int r, const std::vector<Matrix>& B_list,
                               double sigma_min_threshold = 1e-8,
                               std::uint64_t seed = 0x5eed5eedULL);

GroupPoint group_mul(const GroupDescriptor& g, const GroupPoint& a, const GroupPoint& b);
GroupPoint group_inv(const GroupDescriptor& g, const GroupPoint& a);
GroupPoint dilate(const GroupDescriptor& g, double lambda, const GroupPoint& a);

/// Homogeneous norm (|y|^4 + |t|^2)^{1/4}.
double homogeneous_norm(const GroupDescriptor& g, const GroupPoint& a);

/// Quasi-distance rho(h, g) = || g^{-1} h ||.
double quasi_distance(const GroupDescriptor& g, const GroupPoint& a, const GroupPoint& b);

/// Directions used by the non-degeneracy sampling for this r (unit vectors).
std::vector<Vector> nondegeneracy_sample(int r, std::uint64_t seed);

} // namespace specproj
