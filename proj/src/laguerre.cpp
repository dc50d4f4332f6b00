#include "specproj/laguerre.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace specproj {

double laguerre_poly(int m, double alpha, double x) {
    if (m < 0) throw NegativeDegree("laguerre_poly: m must be >= 0");
    if (m > kMaxLaguerreDegree)
        throw Error("laguerre_poly: degree cap " + std::to_string(kMaxLaguerreDegree) +
                    " exceeded");
    if (m == 0) return 1.0;
    double lm1 = 1.0;
    double lm = 1.0 + alpha - x;
    for (int k = 1; k < m; ++k) {
        double next = ((2.0 * k + 1.0 + alpha - x) * lm - (k + alpha) * lm1) / (k + 1.0);
        lm1 = lm;
        lm = next;
    }
    return lm;
}

double laguerre_l(int k, int p, double sigma) {
    if (k < 0 || p < 0) throw NegativeDegree("laguerre_l: k, p must be >= 0");
    if (sigma < 0.0) throw NegativeArgument("laguerre_l: sigma must be >= 0");
    double lognorm = 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + p + 1.0));
    double val = laguerre_poly(k, p, sigma) * std::exp(lognorm - 0.5 * sigma);
    if (p > 0) val *= std::pow(sigma, 0.5 * p);
    return val;
}

std::vector<std::vector<int>> multiindices_of_order(int n, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> k(n, 0);
    // Colexicographic: advance the first component fastest.
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == n - 1) {
            k[pos] = remaining;
            out.push_back(k);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            k[pos] = v;
            rec(pos + 1, remaining - v);
        }
    };
    if (n >= 1) rec(0, m);
    std::reverse(out.begin(), out.end());
    return out;
}

Complex exp_laguerre(const GroupDescriptor& g, const TauSpectrum& spec,
                     const std::vector<int>& k, const std::vector<int>& p, const Vector& y) {
    const int n = g.n();
    if (static_cast<int>(k.size()) != n || static_cast<int>(p.size()) != n)
        throw DimensionMismatch("exp_laguerre: k, p must have length n");
    const double tau_norm = spec.tau.norm();
    const Vector ytau = spec.frame.transpose() * y;

    Complex out(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const double mu_dot = spec.mu[j] / tau_norm;
        const double y1 = ytau[2 * j], y2 = ytau[2 * j + 1];
        const double rho2 = y1 * y1 + y2 * y2;
        const double sigma = 2.0 * spec.mu[j] * rho2;
        const int pj = p[j];
        double radial = laguerre_l(k[j], std::abs(pj), sigma);
        if (pj != 0) {
            if (rho2 == 0.0) return Complex(0.0, 0.0); // sigma^{|p|/2} limit
            if (pj < 0 && (pj % 2) != 0) radial = -radial;
            double theta = std::atan2(y2, y1);
            out *= std::polar(radial, pj * theta);
        } else {
            out *= radial;
        }
        out *= mu_dot * (2.0 * tau_norm / M_PI);
    }
    return out;
}

Complex exp_laguerre(const GroupDescriptor& g, const std::vector<int>& k,
                     const std::vector<int>& p, const Vector& y, const Vector& tau) {
    TauSpectrum spec = spectral_data(g, tau);
    return exp_laguerre(g, spec, k, p, y);
}

double q_m(const GroupDescriptor& g, const TauSpectrum& spec, int m, const Vector& y) {
    const int n = g.n();
    const double sigma = spec.form(y);
    const double pref = std::pow(2.0 / M_PI, n) * spec.det_sqrt;
    return pref * std::exp(-sigma) * laguerre_poly(m, n - 1.0, 2.0 * sigma);
}

double q_m(const GroupDescriptor& g, int m, const Vector& y, const Vector& tau) {
    TauSpectrum spec = spectral_data(g, tau);
    return q_m(g, spec, m, y);
}

double q_abel(const GroupDescriptor& g, const TauSpectrum& spec, double R, const Vector& y) {
    if (R < 0.0 || R >= 1.0) throw RNotInRange("q_abel: R must be in [0, 1)");
    const int n = g.n();
    const double sigma = spec.form(y);
    const double pref = std::pow(2.0 / M_PI, n) * spec.det_sqrt;
    return pref * std::pow(1.0 - R, -n) * std::exp(-sigma * (1.0 + R) / (1.0 - R));
}

Complex symbol_sublaplacian_fd(const GroupDescriptor& g, const TauSpectrum& spec,
                               const std::vector<int>& k, const std::vector<int>& p,
                               const Vector& y, double h) {
    // (-1/4)[ sum_k d2_k f + 4i sum_k a_k d_k f - 4 |a|^2 f ],
    // a = (B^tau)^T y; 4th-order central stencils.
    const int d = g.horizontal_dim();
    const Vector a = spec.b_tau.transpose() * y;
    auto f = [&](const Vector& yy) { return exp_laguerre(g, spec, k, p, yy); };
    const Complex f0 = f(y);

    Complex lap(0.0, 0.0), drift(0.0, 0.0);
    Vector yy = y;
    for (int ax = 0; ax < d; ++ax) {
        const double y0 = y[ax];
        yy[ax] = y0 + h;
        Complex fp1 = f(yy);
        yy[ax] = y0 - h;
        Complex fm1 = f(yy);
        yy[ax] = y0 + 2.0 * h;
        Complex fp2 = f(yy);
        yy[ax] = y0 - 2.0 * h;
        Complex fm2 = f(yy);
        yy[ax] = y0;
        Complex d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        Complex d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        lap += d2;
        drift += a[ax] * d1;
    }
    return -0.25 * (lap + Complex(0.0, 4.0) * drift - 4.0 * a.squaredNorm() * f0);
}

} // namespace specproj
