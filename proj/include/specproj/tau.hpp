#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "specproj/group.hpp"

namespace specproj {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Spectral package of B^tau for one frequency tau != 0.
///
/// frame is the orthogonal matrix whose column pairs (u_j, B^tau u_j / mu_j)
/// normalize B^tau into 2x2 rotation blocks; sym_sqrt is the symmetric
/// positive square root of (B^tau)^T B^tau with eigenvalues mu_j of
/// multiplicity two, and det_sqrt = prod mu_j.
struct TauSpectrum {
    Vector tau;
    Matrix b_tau;
    Vector mu;       // length n, sorted descending, all positive
    Matrix frame;    // orthogonal 2n x 2n
    Matrix sym_sqrt; // symmetric positive definite 2n x 2n
    double det_sqrt = 0.0;

    /// <sym_sqrt y, y>.
    double form(const Vector& y) const { return y.dot(sym_sqrt * y); }
};

/// Holomorphic extension data at a complex frequency z near S^{r-1}.
struct ComplexTauMatrix {
    ComplexVector z;
    ComplexMatrix sym_sqrt;  // holomorphic extension of the square root
    Complex det_sqrt;

    /// Bilinear (not Hermitian) form y^T sym_sqrt y for real y.
    Complex form(const Vector& y) const {
        return (y.transpose() * (sym_sqrt * y))(0);
    }
};

/// B^tau = sum_beta tau_beta B^beta.
Matrix b_tau(const GroupDescriptor& g, const Vector& tau);

/// Full spectral package; throws ZeroTau / DegenerateTau.
TauSpectrum spectral_data(const GroupDescriptor& g, const Vector& tau);

/// (sym_sqrt, det_sqrt) only.
std::pair<Matrix, double> script_b(const GroupDescriptor& g, const Vector& tau);

/// tau-coordinates of y: frame^T y.
Vector tau_coordinates(const GroupDescriptor& g, const TauSpectrum& spec, const Vector& y);

/// Parameters of the closed contour gamma used by the matrix functional
/// calculus: a rectangle around the real eigenvalue range [a, b] of
/// (B^tau)^T B^tau. Sides are split into panels of at most three rectangle
/// heights, each carrying a Gauss-Legendre rule of nodes_per_side points.
struct GammaContour {
    double re_lo, re_hi, im_half;
    int nodes_per_side;
};

GammaContour default_gamma(const GroupDescriptor& g, int nodes_per_side = 32);

/// Holomorphic sqrt of (B^z)^T B^z (transpose without conjugation) via the
/// Cauchy integral over gamma; throws SpectrumEscapedContour when an
/// eigenvalue of (B^z)^T B^z leaves the rectangle.
ComplexTauMatrix script_b_complex(const GroupDescriptor& g, const ComplexVector& z,
                                  const GammaContour& gamma);
ComplexTauMatrix script_b_complex(const GroupDescriptor& g, const ComplexVector& z);

/// Pure memo cache of TauSpectrum keyed by quantized tau; thread safe,
/// idempotent fill.
class TauCache {
  public:
    explicit TauCache(const GroupDescriptor& g) : g_(g) {}
    const TauSpectrum& get(const Vector& tau);

  private:
    const GroupDescriptor& g_;
    std::mutex mutex_;
    std::unordered_map<std::string, std::unique_ptr<TauSpectrum>> map_;
};

} // namespace specproj
