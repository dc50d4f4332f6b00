#include "specproj/quadrature.hpp"

#include <cmath>
#include <functional>

namespace specproj {

namespace {

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
/// mu0 * (first eigenvector component)^2.
Quad1D golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                    double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) J(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) {
        J(i, i + 1) = offdiag[i];
        J(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Quad1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = es.eigenvalues()[i];
        double v0 = es.eigenvectors()(0, i);
        q.weights[i] = mu0 * v0 * v0;
    }
    return q;
}

} // namespace

Quad1D gauss_legendre(int n) {
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(diag, off, 2.0);
}

Quad1D gauss_legendre_ab(int n, double a, double b) {
    Quad1D q = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = mid + half * q.nodes[i];
        q.weights[i] *= half;
    }
    return q;
}

Quad1D gauss_laguerre(int n, double alpha) {
    std::vector<double> diag(n), off(n - 1);
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + alpha));
    Quad1D q = golub_welsch(diag, off, std::tgamma(alpha + 1.0));
    // Eigenvector-based weights lose all relative accuracy once they
    // underflow toward the largest nodes; recompute every weight from the
    // Christoffel function 1 / sum_k p_k(x)^2 with the orthonormal
    // recurrence b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
    for (int i = 0; i < n; ++i) {
        const double x = q.nodes[i];
        double pk1 = 0.0;
        double pk = 1.0 / std::sqrt(std::tgamma(alpha + 1.0));
        double sum = pk * pk;
        for (int k = 0; k + 1 < n; ++k) {
            const double bk = k > 0 ? std::sqrt(k * (k + alpha)) : 0.0;
            const double bk1 = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
            const double next = ((x - diag[k]) * pk - bk * pk1) / bk1;
            pk1 = pk;
            pk = next;
            sum += pk * pk;
        }
        q.weights[i] = 1.0 / sum;
    }
    return q;
}

double SphereRule::surface_area(int r) {
    // |S^{r-1}| = 2 pi^{r/2} / Gamma(r/2); counting measure of size 2 for r=1.
    if (r == 1) return 2.0;
    return 2.0 * std::pow(M_PI, 0.5 * r) / std::tgamma(0.5 * r);
}

double SphereRule::monomial_moment(const std::vector<int>& alpha) {
    const int r = static_cast<int>(alpha.size());
    for (int a : alpha)
        if (a % 2 == 1) return 0.0;
    if (r == 1) return 2.0;
    // 2 prod Gamma((a_i+1)/2) / Gamma((|a|+r)/2)
    double total = 0.0;
    double num = std::log(2.0);
    for (int a : alpha) {
        num += std::lgamma(0.5 * (a + 1));
        total += a;
    }
    num -= std::lgamma(0.5 * (total + r));
    return std::exp(num);
}

SphereRule::SphereRule(int r, int base_order) : r_(r) {
    if (r < 1 || r > 4) throw ShapeError("SphereRule: r must be in [1, 4]");
    if (base_order < 4) base_order = 4;
    if (r == 1) {
        nodes_.push_back(Eigen::VectorXd::Constant(1, 1.0));
        nodes_.push_back(Eigen::VectorXd::Constant(1, -1.0));
        weights_ = {1.0, 1.0};
    } else if (r == 2) {
        const int N = base_order;
        const double w = 2.0 * M_PI / N;
        for (int k = 0; k < N; ++k) {
            double th = 2.0 * M_PI * k / N;
            Eigen::VectorXd v(2);
            v << std::cos(th), std::sin(th);
            nodes_.push_back(v);
            weights_.push_back(w);
        }
    } else if (r == 3) {
        const int Nphi = base_order;
        const int Nc = std::max(8, base_order / 2);
        Quad1D gl = gauss_legendre(Nc);
        const double wphi = 2.0 * M_PI / Nphi;
        for (int i = 0; i < Nc; ++i) {
            double c = gl.nodes[i];
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int k = 0; k < Nphi; ++k) {
                double phi = 2.0 * M_PI * k / Nphi;
                Eigen::VectorXd v(3);
                v << s * std::cos(phi), s * std::sin(phi), c;
                nodes_.push_back(v);
                weights_.push_back(gl.weights[i] * wphi);
            }
        }
    } else {
        // S^3 via (cos(eta) e^{i xi1}, sin(eta) e^{i xi2}); with u = sin^2(eta)
        // the measure is (1/2) du dxi1 dxi2.
        const int Nxi = std::max(8, base_order / 2);
        const int Nu = std::max(8, base_order / 4);
        Quad1D gl = gauss_legendre_ab(Nu, 0.0, 1.0);
        const double wxi = 2.0 * M_PI / Nxi;
        for (int i = 0; i < Nu; ++i) {
            double u = gl.nodes[i];
            double ce = std::sqrt(1.0 - u), se = std::sqrt(u);
            for (int k1 = 0; k1 < Nxi; ++k1) {
                double x1 = 2.0 * M_PI * k1 / Nxi;
                for (int k2 = 0; k2 < Nxi; ++k2) {
                    double x2 = 2.0 * M_PI * k2 / Nxi;
                    Eigen::VectorXd v(4);
                    v << ce * std::cos(x1), ce * std::sin(x1), se * std::cos(x2),
                        se * std::sin(x2);
                    nodes_.push_back(v);
                    weights_.push_back(0.5 * gl.weights[i] * wxi * wxi);
                }
            }
        }
    }
    for (double w : weights_) weight_sum_ += w;
    for (auto& v : nodes_) {
        if (std::abs(v.norm() - 1.0) > 1e-14) v.normalize();
    }
    if (std::abs(weight_sum_ - surface_area(r_)) > 1e-10 * surface_area(r_))
        throw QuadratureNotConverged("sphere rule weights do not sum to surface area");
}

void SphereRule::validate_degree(int degree, double tol) const {
    std::vector<int> alpha(r_, 0);
    const double scale = surface_area(r_);
    // Iterate all multi-indices with |alpha| <= degree.
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == r_) {
            double approx = 0.0;
            for (int q = 0; q < size(); ++q) {
                double term = weights_[q];
                for (int i = 0; i < r_; ++i) term *= std::pow(nodes_[q][i], alpha[i]);
                approx += term;
            }
            double exact = monomial_moment(alpha);
            if (std::abs(approx - exact) > tol * scale)
                throw QuadratureNotConverged("sphere rule fails monomial exactness at degree " +
                                             std::to_string(degree));
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            alpha[pos] = a;
            rec(pos + 1, remaining - a);
        }
        alpha[pos] = 0;
    };
    rec(0, degree);
}

} // namespace specproj
