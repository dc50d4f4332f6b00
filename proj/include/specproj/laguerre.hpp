#pragma once

#include <complex>
#include <vector>

#include "specproj/tau.hpp"

namespace specproj {

/// Multi-index pair (k, p): k_j >= 0 are Laguerre degrees, p_j in Z are
/// angular indices.
struct MultiIndex {
    std::vector<int> k;
    std::vector<int> p;
    int order() const {
        int s = 0;
        for (int v : k) s += v;
        return s;
    }
};

constexpr int kMaxLaguerreDegree = 60;

/// Generalized Laguerre polynomial L_m^{(alpha)}(x) by the three-term
/// recurrence.
double laguerre_poly(int m, double alpha, double x);

/// Orthonormal Laguerre function
/// l_k^{(p)}(sigma) = sqrt(k! / (k+p)!) L_k^{(p)}(sigma) sigma^{p/2} e^{-sigma/2}.
double laguerre_l(int k, int p, double sigma);

/// Enumerate {k in Z_{>=0}^n : |k| = m} in colexicographic order.
std::vector<std::vector<int>> multiindices_of_order(int n, int m);

/// Exponential Laguerre function evaluated through tau-coordinates:
/// prod_j mu_j(tau_dot) * (2|tau|/pi)(sgn p_j)^{p_j}
///   l_{k_j}^{(|p_j|)}(2 mu_j(tau) |y_j^tau|^2) e^{i p_j theta_j}.
/// At a planar origin with p_j != 0 the value is 0 by continuity.
Complex exp_laguerre(const GroupDescriptor& g, const TauSpectrum& spec,
                     const std::vector<int>& k, const std::vector<int>& p, const Vector& y);
Complex exp_laguerre(const GroupDescriptor& g, const std::vector<int>& k,
                     const std::vector<int>& p, const Vector& y, const Vector& tau);

/// Q_m(y, tau) = (2^n det_sqrt / pi^n) e^{-sigma} L_m^{(n-1)}(2 sigma) with
/// sigma = <sym_sqrt y, y>; equals the sum of exp_laguerre over |k| = m.
double q_m(const GroupDescriptor& g, const TauSpectrum& spec, int m, const Vector& y);
double q_m(const GroupDescriptor& g, int m, const Vector& y, const Vector& tau);

/// Sum over m of R^m Q_m in closed form:
/// (2^n det_sqrt / pi^n) (1-R)^{-n} e^{-sigma (1+R)/(1-R)}.
double q_abel(const GroupDescriptor& g, const TauSpectrum& spec, double R, const Vector& y);

/// Partial symbol of the sub-Laplacian applied by 4th-order central finite
/// differences: (-1/4) sum_k (d_k + 2i a_k)^2 where a = (B^tau)^T y; used by
/// the eigenfunction tests.
Complex symbol_sublaplacian_fd(const GroupDescriptor& g, const TauSpectrum& spec,
                               const std::vector<int>& k, const std::vector<int>& p,
                               const Vector& y, double h);

} // namespace specproj
