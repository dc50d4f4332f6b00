#include "specproj/group.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace specproj {

namespace {

constexpr int kMaxN = 16;
constexpr int kMaxR = 4;

Matrix b_tau_of(const std::vector<Matrix>& B, const Vector& tau) {
    Matrix out = Matrix::Zero(B[0].rows(), B[0].cols());
    for (int beta = 0; beta < tau.size(); ++beta) out += tau[beta] * B[beta];
    return out;
}

} // namespace

Vector GroupDescriptor::bilinear(const Vector& x, const Vector& y) const {
    if (x.size() != 2 * n_ || y.size() != 2 * n_)
        throw DimensionMismatch("bilinear: vectors must have length 2n");
    Vector out(r_);
    for (int beta = 0; beta < r_; ++beta) out[beta] = x.dot(B_[beta] * y);
    return out;
}

std::vector<Vector> nondegeneracy_sample(int r, std::uint64_t seed) {
    std::vector<Vector> dirs;
    if (r == 1) {
        dirs.push_back(Vector::Constant(1, 1.0));
        dirs.push_back(Vector::Constant(1, -1.0));
        return dirs;
    }
    if (r == 2) {
        for (int k = 0; k < 360; ++k) {
            double th = 2.0 * M_PI * k / 360.0;
            Vector v(2);
            v << std::cos(th), std::sin(th);
            dirs.push_back(v);
        }
        return dirs;
    }
    // Symmetric frame standing in for a 2r(r+1)-point design: +-e_i, the
    // normalized pair sums (+-e_i +- e_j)/sqrt(2), and 2r corner directions.
    for (int i = 0; i < r; ++i) {
        Vector v = Vector::Zero(r);
        v[i] = 1.0;
        dirs.push_back(v);
        dirs.push_back(-v);
    }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            for (int si = -1; si <= 1; si += 2)
                for (int sj = -1; sj <= 1; sj += 2) {
                    Vector v = Vector::Zero(r);
                    v[i] = si * M_SQRT1_2;
                    v[j] = sj * M_SQRT1_2;
                    dirs.push_back(v);
                }
    for (int c = 0; c < 2 * r; ++c) {
        Vector v(r);
        for (int i = 0; i < r; ++i) v[i] = ((c >> i) & 1) ? -1.0 : 1.0;
        dirs.push_back(v.normalized());
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        Vector v(r);
        do {
            for (int i = 0; i < r; ++i) v[i] = gauss(rng);
        } while (v.norm() < 1e-8);
        dirs.push_back(v.normalized());
    }
    return dirs;
}

GroupDescriptor validate_group(int n, int r, const std::vector<Matrix>& B_list,
                               double sigma_min_threshold, std::uint64_t seed) {
    if (n < 1 || n > kMaxN) throw ShapeError("n must be in [1, 16]");
    if (r < 1 || r > kMaxR) throw ShapeError("r must be in [1, 4]");
    if (static_cast<int>(B_list.size()) != r)
        throw ShapeError("expected " + std::to_string(r) + " matrices, got " +
                         std::to_string(B_list.size()));
    const int d = 2 * n;
    for (int beta = 0; beta < r; ++beta) {
        const Matrix& B = B_list[beta];
        if (B.rows() != d || B.cols() != d)
            throw ShapeError("B^" + std::to_string(beta + 1) + " must be " + std::to_string(d) +
                             "x" + std::to_string(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (B(i, j) != -B(j, i)) throw NotSkewSymmetric(beta, i, j);
    }

    double sig_min = std::numeric_limits<double>::infinity();
    double btb_min = std::numeric_limits<double>::infinity();
    double btb_max = 0.0;
    for (const Vector& tau : nondegeneracy_sample(r, seed)) {
        Matrix Bt = b_tau_of(B_list, tau);
        Eigen::JacobiSVD<Matrix> svd(Bt);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        if (smin < sigma_min_threshold) {
            std::vector<double> tv(tau.data(), tau.data() + tau.size());
            throw Degenerate("B^tau degenerate (sigma_min=" + std::to_string(smin) + ")",
                             std::move(tv), smin);
        }
        sig_min = std::min(sig_min, smin);
        btb_min = std::min(btb_min, smin * smin);
        btb_max = std::max(btb_max, smax * smax);
    }

    GroupDescriptor g;
    g.n_ = n;
    g.r_ = r;
    g.B_ = B_list;
    g.sigma_min_ = sig_min;
    g.btb_min_ = btb_min;
    g.btb_max_ = btb_max;
    g.threshold_ = sigma_min_threshold;
    return g;
}

GroupPoint group_mul(const GroupDescriptor& g, const GroupPoint& a, const GroupPoint& b) {
    if (a.y.size() != g.horizontal_dim() || b.y.size() != g.horizontal_dim() ||
        a.t.size() != g.r() || b.t.size() != g.r())
        throw DimensionMismatch("group_mul: point dimensions do not match group");
    GroupPoint out;
    out.y = a.y + b.y;
    out.t = a.t + b.t + 2.0 * g.bilinear(a.y, b.y);
    return out;
}

GroupPoint group_inv(const GroupDescriptor& g, const GroupPoint& a) {
    (void)g;
    return GroupPoint{-a.y, -a.t};
}

GroupPoint dilate(const GroupDescriptor& g, double lambda, const GroupPoint& a) {
    (void)g;
    if (!(lambda > 0.0)) throw NonPositiveLambda("dilate: lambda must be positive");
    return GroupPoint{lambda * a.y, lambda * lambda * a.t};
}

double homogeneous_norm(const GroupDescriptor& g, const GroupPoint& a) {
    (void)g;
    double y2 = a.y.squaredNorm();
    return std::pow(y2 * y2 + a.t.squaredNorm(), 0.25);
}

double quasi_distance(const GroupDescriptor& g, const GroupPoint& a, const GroupPoint& b) {
    return homogeneous_norm(g, group_mul(g, group_inv(g, b), a));
}

} // namespace specproj
