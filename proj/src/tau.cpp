#include "specproj/tau.hpp"

#include <cmath>
#include <cstring>

#include "specproj/quadrature.hpp"

namespace specproj {

Matrix b_tau(const GroupDescriptor& g, const Vector& tau) {
    if (tau.size() != g.r()) throw DimensionMismatch("b_tau: tau must have length r");
    Matrix out = Matrix::Zero(g.horizontal_dim(), g.horizontal_dim());
    for (int beta = 0; beta < g.r(); ++beta) out += tau[beta] * g.tensor(beta);
    return out;
}

TauSpectrum spectral_data(const GroupDescriptor& g, const Vector& tau) {
    if (tau.size() != g.r()) throw DimensionMismatch("spectral_data: tau must have length r");
    const double tau_norm = tau.norm();
    if (tau_norm == 0.0) throw ZeroTau("spectral_data: tau = 0");
    const int d = g.horizontal_dim();
    const int n = g.n();

    TauSpectrum s;
    s.tau = tau;
    s.b_tau = b_tau(g, tau);

    // Symmetric eigendecomposition of (B^tau)^T B^tau. Eigenvalues are the
    // mu_j^2, each of multiplicity two.
    Matrix G = s.b_tau.transpose() * s.b_tau;
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    const Vector& ev = es.eigenvalues(); // ascending
    if (ev[0] < 0.0 || std::sqrt(std::max(0.0, ev[0])) < g.threshold() * tau_norm)
        throw DegenerateTau("spectral_data: sigma_min(B^tau) below threshold");

    s.mu.resize(n);
    s.frame.resize(d, d);

    // Walk eigenvalues from the top in clusters; within each cluster build
    // orthonormal pairs (u, B^tau u / mu), re-orthogonalizing candidate u's
    // against the pairs already chosen so degenerate eigenspaces come out
    // orthonormal.
    const double cluster_tol = 1e-8 * std::max(1.0, ev[d - 1]);
    int col = 0; // next frame column
    int j = 0;   // next mu slot
    int i = d - 1;
    while (i >= 0) {
        int lo = i;
        while (lo - 1 >= 0 && std::abs(ev[lo - 1] - ev[i]) <= cluster_tol) --lo;
        const int dim = i - lo + 1;
        if (dim % 2 != 0)
            throw DegenerateTau("spectral_data: odd eigenvalue cluster, B^tau nearly degenerate");
        const double mu = std::sqrt(0.5 * (ev[i] + ev[lo]));
        std::vector<Vector> basis;
        for (int k = lo; k <= i; ++k) basis.push_back(es.eigenvectors().col(k));
        std::vector<Vector> chosen; // pairs already fixed, in order u1,v1,u2,v2,...
        for (int p = 0; p < dim / 2; ++p) {
            // Pick the cluster basis vector with the largest residual after
            // projecting out the chosen pairs.
            Vector u;
            double best = -1.0;
            for (const Vector& w : basis) {
                Vector res = w;
                for (const Vector& c : chosen) res -= c.dot(w) * c;
                double nn = res.norm();
                if (nn > best) {
                    best = nn;
                    u = res;
                }
            }
            if (best < 1e-6)
                throw DegenerateTau("spectral_data: eigenspace re-orthogonalization failed");
            u.normalize();
            Vector v = (s.b_tau * u) / mu;
            // Roundoff cleanup: v is orthonormal to u in exact arithmetic.
            v -= v.dot(u) * u;
            for (const Vector& c : chosen) v -= c.dot(v) * c;
            v.normalize();
            s.frame.col(col) = u;
            s.frame.col(col + 1) = v;
            s.mu[j] = mu;
            chosen.push_back(u);
            chosen.push_back(v);
            col += 2;
            ++j;
        }
        i = lo - 1;
    }

    s.det_sqrt = 1.0;
    for (int k = 0; k < n; ++k) s.det_sqrt *= s.mu[k];

    // sym_sqrt from the same eigenbasis; frame-choice independent.
    Matrix lambda = Matrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
        lambda(2 * k, 2 * k) = s.mu[k];
        lambda(2 * k + 1, 2 * k + 1) = s.mu[k];
    }
    s.sym_sqrt = s.frame * lambda * s.frame.transpose();
    s.sym_sqrt = 0.5 * (s.sym_sqrt + s.sym_sqrt.transpose()).eval();
    return s;
}

std::pair<Matrix, double> script_b(const GroupDescriptor& g, const Vector& tau) {
    TauSpectrum s = spectral_data(g, tau);
    return {s.sym_sqrt, s.det_sqrt};
}

Vector tau_coordinates(const GroupDescriptor& g, const TauSpectrum& spec, const Vector& y) {
    if (y.size() != g.horizontal_dim())
        throw DimensionMismatch("tau_coordinates: y must have length 2n");
    return spec.frame.transpose() * y;
}

GammaContour default_gamma(const GroupDescriptor& g, int nodes_per_side) {
    const double a = g.btb_eig_min();
    const double b = g.btb_eig_max();
    return GammaContour{0.5 * a, 2.0 * b, 0.25 * a, nodes_per_side};
}

ComplexTauMatrix script_b_complex(const GroupDescriptor& g, const ComplexVector& z,
                                  const GammaContour& gamma) {
    if (z.size() != g.r()) throw DimensionMismatch("script_b_complex: z must have length r");
    const int d = g.horizontal_dim();

    ComplexMatrix Bz = ComplexMatrix::Zero(d, d);
    for (int beta = 0; beta < g.r(); ++beta) Bz += z[beta] * g.tensor(beta);
    ComplexMatrix G = Bz.transpose() * Bz; // transpose, no conjugation

    // Eigenvalues must keep at least half the rectangle height away from
    // gamma; poles closer than that wreck the panel quadrature rate.
    const double margin = 0.5 * gamma.im_half;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(G, /*computeEigenvectors=*/false);
    for (int k = 0; k < d; ++k) {
        Complex ev = es.eigenvalues()[k];
        if (ev.real() <= gamma.re_lo + margin || ev.real() >= gamma.re_hi - margin ||
            std::abs(ev.imag()) >= gamma.im_half - margin)
            throw SpectrumEscapedContour("eigenvalue of (B^z)^T B^z too close to gamma");
    }

    // Cauchy integral (1/2 pi i) oint sqrt(zeta) (zeta I - G)^{-1} d zeta over
    // the rectangle. Long sides are split into panels no longer than three
    // rectangle heights so the Gauss-Legendre rate stays geometric even for
    // flat rectangles (poles sit im_half away from the long sides).
    Quad1D gl = gauss_legendre(gamma.nodes_per_side);
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    const Complex corners[4] = {
        Complex(gamma.re_lo, -gamma.im_half), Complex(gamma.re_hi, -gamma.im_half),
        Complex(gamma.re_hi, gamma.im_half), Complex(gamma.re_lo, gamma.im_half)};
    ComplexMatrix I = ComplexMatrix::Identity(d, d);
    const double max_panel = 2.0 * gamma.im_half;
    for (int side = 0; side < 4; ++side) {
        Complex z0 = corners[side];
        Complex z1 = corners[(side + 1) % 4];
        const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(z1 - z0) / max_panel)));
        for (int p = 0; p < panels; ++p) {
            Complex p0 = z0 + (z1 - z0) * (static_cast<double>(p) / panels);
            Complex p1 = z0 + (z1 - z0) * (static_cast<double>(p + 1) / panels);
            Complex mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
            for (int q = 0; q < gamma.nodes_per_side; ++q) {
                Complex zeta = mid + half * gl.nodes[q];
                Complex dzeta = half * gl.weights[q];
                ComplexMatrix res = (zeta * I - G).partialPivLu().solve(I);
                acc += std::sqrt(zeta) * dzeta * res;
            }
        }
    }
    ComplexTauMatrix out;
    out.z = z;
    out.sym_sqrt = acc / Complex(0.0, 2.0 * M_PI);
    out.det_sqrt = std::sqrt(out.sym_sqrt.determinant());
    if (!(out.det_sqrt.real() > 0.0))
        throw SpectrumEscapedContour("det sqrt branch left the right half-plane");
    return out;
}

ComplexTauMatrix script_b_complex(const GroupDescriptor& g, const ComplexVector& z) {
    return script_b_complex(g, z, default_gamma(g));
}

const TauSpectrum& TauCache::get(const Vector& tau) {
    // Quantized key: exact bit pattern of the components.
    std::string key(reinterpret_cast<const char*>(tau.data()), sizeof(double) * tau.size());
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end())
        it = map_.emplace(std::move(key), std::make_unique<TauSpectrum>(spectral_data(g_, tau)))
                 .first;
    return *it->second;
}

} // namespace specproj
