#include "specproj/kernels.hpp"

#include <cmath>

#include "specproj/laguerre.hpp"
#include "specproj/threads.hpp"

namespace specproj {

namespace {

inline Complex ipow(Complex base, int e) {
    Complex out(1.0, 0.0);
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

double binom(int r, int j) {
    double out = 1.0;
    for (int i = 0; i < j; ++i) out = out * (r - i) / (i + 1);
    return out;
}

/// Bilinear (unconjugated) form y^T F y for real y, complex F.
inline Complex bilinear_form(const ComplexMatrix& F, const Vector& y) {
    Complex s(0.0, 0.0);
    const int d = static_cast<int>(y.size());
    for (int i = 0; i < d; ++i) {
        Complex row(0.0, 0.0);
        for (int j = 0; j < d; ++j) row += F(i, j) * y[j];
        s += y[i] * row;
    }
    return s;
}

/// Householder orthogonal matrix with first column dir (unit).
Matrix orthogonal_from_first_column(const Vector& dir) {
    const int r = static_cast<int>(dir.size());
    Vector u = Vector::Zero(r);
    u[0] = 1.0;
    u -= dir;
    double nn = u.squaredNorm();
    if (nn < 1e-28) return Matrix::Identity(r, r);
    return Matrix::Identity(r, r) - (2.0 / nn) * (u * u.transpose());
}

} // namespace

double c_mj(int n, int r, int m, int j) {
    if (j < 0 || j > r || j > m) return 0.0;
    double mag = std::pow(2.0, n - r) / std::pow(M_PI, n + r) * binom(r, j) *
                 std::exp(std::lgamma(m + n + r - j) - std::lgamma(m - j + 1.0));
    return (m % 2 == 0) ? mag : -mag;
}

KernelEvaluator::KernelEvaluator(const GroupDescriptor& g, KernelConfig cfg)
    : g_(g),
      cfg_(cfg),
      rule_(g.r(), cfg.sphere_degree),
      rule_fine_(g.r(), g.r() == 1 ? cfg.sphere_degree : 2 * cfg.sphere_degree),
      gamma_(default_gamma(g, cfg.gamma_nodes_per_side)),
      radial_(gauss_laguerre(cfg.radial_nodes, 0.0)) {
    table_ = build_table(rule_);
    table_fine_ = g.r() == 1 ? table_ : build_table(rule_fine_);
}

KernelEvaluator::NodeTable KernelEvaluator::build_table(const SphereRule& rule) const {
    NodeTable t;
    t.rule = &rule;
    const int nq = rule.size();
    t.det.resize(nq);
    t.form.resize(nq);
    parallel_for(static_cast<std::size_t>(nq), [&](std::size_t q) {
        TauSpectrum s = spectral_data(g_, rule.nodes()[q]);
        t.det[q] = s.det_sqrt;
        t.form[q] = s.sym_sqrt;
    });
    return t;
}

std::vector<Complex> KernelEvaluator::eval_sphere(const NodeTable& table,
                                                  const std::vector<int>& ms, const Vector& y,
                                                  const Vector& t) const {
    const int n = g_.n(), r = g_.r();
    const int nq = table.rule->size();
    std::vector<std::vector<double>> coeffs(ms.size());
    for (std::size_t im = 0; im < ms.size(); ++im) {
        coeffs[im].resize(std::min(r, ms[im]) + 1);
        for (int j = 0; j <= std::min(r, ms[im]); ++j) coeffs[im][j] = c_mj(n, r, ms[im], j);
    }
    std::vector<Complex> out(ms.size(), Complex(0.0, 0.0));
    for (int q = 0; q < nq; ++q) {
        const double sigma = y.dot(table.form[q] * y);
        if (!(sigma > 0.0))
            throw YZero("p_m: quadratic form vanished; use the continued representation");
        const double a = t.dot(table.rule->nodes()[q]);
        const Complex num(sigma, a), den(sigma, -a);
        const Complex ratio = num / den;
        const double wdet = table.rule->weights()[q] * table.det[q];
        const Complex den_nr = ipow(den, n + r);
        for (std::size_t im = 0; im < ms.size(); ++im) {
            const int m = ms[im];
            Complex acc(0.0, 0.0);
            for (int j = 0; j <= std::min(r, m); ++j)
                acc += coeffs[im][j] * ipow(ratio, m - j);
            out[im] += wdet * acc / den_nr;
        }
    }
    return out;
}

Complex KernelEvaluator::p_m(int m, const Vector& y, const Vector& t) const {
    if (y.norm() == 0.0) throw YZero("p_m: y = 0, use p_m_continued");
    if (cfg_.check_convergence && g_.r() > 1) {
        auto [coarse, fine] = p_m_levels(m, y, t);
        if (std::abs(coarse - fine) > cfg_.quad_tol * (std::abs(fine) + cfg_.quad_tol))
            throw QuadratureNotConverged("p_m: sphere rule refinement disagreement");
        return fine;
    }
    return eval_sphere(table_fine_, {m}, y, t)[0];
}

std::vector<Complex> KernelEvaluator::p_m_batch(const std::vector<int>& ms, const Vector& y,
                                                const Vector& t) const {
    if (y.norm() == 0.0) throw YZero("p_m: y = 0, use p_m_continued");
    return eval_sphere(table_fine_, ms, y, t);
}

std::pair<Complex, Complex> KernelEvaluator::p_m_levels(int m, const Vector& y,
                                                        const Vector& t) const {
    if (y.norm() == 0.0) throw YZero("p_m: y = 0, use p_m_continued");
    return {eval_sphere(table_, {m}, y, t)[0], eval_sphere(table_fine_, {m}, y, t)[0]};
}

Complex KernelEvaluator::p_m_oracle(int m, const Vector& y, const Vector& t) const {
    if (y.norm() == 0.0) throw YZero("p_m_oracle: y = 0");
    const int n = g_.n(), r = g_.r();
    const NodeTable& table = table_fine_;
    const int nq = table.rule->size();
    const int nrad = cfg_.radial_nodes;

    // L_m^{(n-1)}(2 u_i) at the radial nodes.
    std::vector<double> lag(nrad);
    for (int i = 0; i < nrad; ++i) lag[i] = laguerre_poly(m, n - 1.0, 2.0 * radial_.nodes[i]);

    const double pref = std::pow(2.0, n - r) / std::pow(M_PI, n + r);
    Complex acc(0.0, 0.0);
    for (int q = 0; q < nq; ++q) {
        const double sigma = y.dot(table.form[q] * y);
        if (!(sigma > 0.0)) throw YZero("p_m_oracle: quadratic form vanished");
        const double b = t.dot(table.rule->nodes()[q]) / sigma;
        Complex radial(0.0, 0.0);
        for (int i = 0; i < nrad; ++i) {
            const double u = radial_.nodes[i];
            radial += radial_.weights[i] * std::pow(u, n + r - 1) * lag[i] *
                      std::polar(1.0, u * b);
        }
        acc += table.rule->weights()[q] * table.det[q] * std::pow(sigma, -(n + r)) * radial;
    }
    return pref * acc;
}

namespace {

/// Panel mesh on [0, pi] graded geometrically toward pi/2, where the
/// integrand peaks with width ~ eps when |y| is small (z(pi/2) = i eps).
std::vector<double> graded_phi_mesh(double eps) {
    std::vector<double> breaks{0.0};
    std::vector<double> off;
    double w = std::min(0.4, 8.0 * eps);
    for (double v = 0.4; v > w; v *= 0.5) off.push_back(v);
    off.push_back(w);
    breaks.push_back(M_PI / 2.0 - 0.4 - 0.3); // comfortable outer panel edge
    for (double v : off) breaks.push_back(M_PI / 2.0 - v);
    breaks.push_back(M_PI / 2.0);
    for (auto it = off.rbegin(); it != off.rend(); ++it) breaks.push_back(M_PI / 2.0 + *it);
    breaks.push_back(M_PI / 2.0 + 0.4 + 0.3);
    breaks.push_back(M_PI);
    return breaks;
}

} // namespace

KernelEvaluator::ContourTable KernelEvaluator::build_contour_table(const Vector& t_dir,
                                                                   double eps) const {
    const int r = g_.r();
    const Matrix Ot = t_dir.norm() > 0.0 ? orthogonal_from_first_column(t_dir)
                                         : Matrix::Identity(r, r);
    const SphereRule sub(r - 1, std::max(8, cfg_.sphere_degree / 8));
    const std::vector<double> breaks = graded_phi_mesh(eps);
    const int per_panel = std::max(8, cfg_.contour_nodes / 4);
    Quad1D gl_ref = gauss_legendre(per_panel);
    std::vector<double> phis, phiw;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double mid = 0.5 * (breaks[b] + breaks[b + 1]);
        const double half = 0.5 * (breaks[b + 1] - breaks[b]);
        for (int q = 0; q < per_panel; ++q) {
            phis.push_back(mid + half * gl_ref.nodes[q]);
            phiw.push_back(half * gl_ref.weights[q]);
        }
    }

    ContourTable table;
    const int total = static_cast<int>(phis.size()) * sub.size();
    table.z.reserve(total);
    table.weight.reserve(total);
    table.det.reserve(total);
    table.form.reserve(total);
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const double phi = phis[i];
        const double c = std::cos(phi), s = std::sin(phi);
        const Complex z(c, eps * s * s);
        const Complex v = Complex(1.0, -2.0 * eps * c) + Complex(eps * eps * s * s, 0.0);
        const Complex sqrt_v = std::sqrt(v);
        const Complex w1z = s * sqrt_v; // sqrt(1 - z^2), positive branch on the segment
        // dz and the slice weight (1-z^2)^{(r-3)/2} combine into
        // sin^{r-2} * (1 - 2 i eps cos) * v^{(r-3)/2}.
        Complex vpow;
        if (r == 2)
            vpow = 1.0 / sqrt_v;
        else if (r == 3)
            vpow = Complex(1.0, 0.0);
        else
            vpow = sqrt_v;
        const Complex contour_w =
            phiw[i] * std::pow(s, r - 2) * Complex(1.0, -2.0 * eps * c) * vpow;
        for (int q = 0; q < sub.size(); ++q) {
            ComplexVector tau_c(r);
            tau_c[0] = z;
            for (int k = 1; k < r; ++k) tau_c[k] = w1z * sub.nodes()[q][k - 1];
            tau_c = (Ot * tau_c.matrix()).eval();
            ComplexTauMatrix cb = script_b_complex(g_, tau_c, gamma_);
            table.z.push_back(z);
            table.weight.push_back(contour_w * sub.weights()[q]);
            table.det.push_back(cb.det_sqrt);
            table.form.push_back(std::move(cb.sym_sqrt));
        }
    }
    return table;
}

std::vector<Complex> KernelEvaluator::eval_contour(const ContourTable& table,
                                                   const std::vector<int>& ms, const Vector& y,
                                                   double t_norm) const {
    const int n = g_.n(), r = g_.r();
    std::vector<std::vector<double>> coeffs(ms.size());
    for (std::size_t im = 0; im < ms.size(); ++im) {
        coeffs[im].resize(std::min(r, ms[im]) + 1);
        for (int j = 0; j <= std::min(r, ms[im]); ++j) coeffs[im][j] = c_mj(n, r, ms[im], j);
    }
    std::vector<Complex> out(ms.size(), Complex(0.0, 0.0));
    const std::size_t total = table.z.size();
    for (std::size_t q = 0; q < total; ++q) {
        const Complex s = bilinear_form(table.form[q], y);
        const Complex itz = Complex(0.0, t_norm) * table.z[q];
        const Complex num = s + itz, den = s - itz;
        const Complex wdet = table.weight[q] * table.det[q];
        for (std::size_t im = 0; im < ms.size(); ++im) {
            const int m = ms[im];
            Complex acc(0.0, 0.0);
            for (int j = 0; j <= std::min(r, m); ++j)
                acc += coeffs[im][j] * ipow(num, m - j) / ipow(den, m + n + r - j);
            out[im] += wdet * acc;
        }
    }
    return out;
}

std::vector<Complex> KernelEvaluator::eval_r1_continued(const std::vector<int>& ms,
                                                        const Vector& y, const Vector& t) const {
    // For r = 1 the slice sphere S^{r-2} is empty and the two-point sum
    // extends directly to y = 0 (t != 0): the denominators never vanish.
    const int n = g_.n(), r = 1;
    const NodeTable& table = table_fine_;
    std::vector<Complex> out(ms.size(), Complex(0.0, 0.0));
    for (int q = 0; q < table.rule->size(); ++q) {
        const double sigma = y.dot(table.form[q] * y);
        const double a = t[0] * table.rule->nodes()[q][0];
        const Complex num(sigma, a), den(sigma, -a);
        const double wdet = table.rule->weights()[q] * table.det[q];
        for (std::size_t im = 0; im < ms.size(); ++im) {
            const int m = ms[im];
            Complex acc(0.0, 0.0);
            for (int j = 0; j <= std::min(r, m); ++j)
                acc += c_mj(n, r, m, j) * ipow(num, m - j) / ipow(den, m + n + r - j);
            out[im] += wdet * acc;
        }
    }
    return out;
}

std::vector<Complex> KernelEvaluator::p_m_continued_batch(const std::vector<int>& ms,
                                                          const Vector& y,
                                                          const Vector& t) const {
    const double ynorm = y.norm(), tnorm = t.norm();
    if (ynorm == 0.0 && tnorm == 0.0)
        throw OriginPoint("p_m_continued: kernel undefined at the origin");
    if (g_.r() == 1) return eval_r1_continued(ms, y, t);

    const Vector t_dir = tnorm > 0.0 ? Vector(t / tnorm) : Vector(Vector::Zero(g_.r()));
    double eps = cfg_.epsilon;
    for (int attempt = 0;; ++attempt) {
        try {
            ContourTable table = build_contour_table(t_dir, eps);
            return eval_contour(table, ms, y, tnorm);
        } catch (const SpectrumEscapedContour&) {
            if (attempt >= 4) throw;
            eps *= 0.5;
        }
    }
}

Complex KernelEvaluator::p_m_continued(int m, const Vector& y, const Vector& t) const {
    return p_m_continued_batch({m}, y, t)[0];
}

Complex KernelEvaluator::abel_kernel(double R, const Vector& y, const Vector& t) const {
    if (R < 0.0 || R >= 1.0) throw RNotInRange("abel_kernel: R must be in [0, 1)");
    if (y.norm() == 0.0) throw YZero("abel_kernel: y = 0");
    const int n = g_.n(), r = g_.r();
    const double M = (1.0 - R) / (1.0 + R);
    const NodeTable& table = table_fine_;
    Complex acc(0.0, 0.0);
    for (int q = 0; q < table.rule->size(); ++q) {
        const double sigma = y.dot(table.form[q] * y);
        const double a = t.dot(table.rule->nodes()[q]);
        acc += table.rule->weights()[q] * table.det[q] / ipow(Complex(sigma, -M * a), n + r);
    }
    const double pref = std::tgamma(n + r) * std::pow(2.0, n - r) * std::pow(M, r) /
                        (std::pow(M_PI, n + r) * std::pow(1.0 + R, n));
    return pref * acc;
}

Complex KernelEvaluator::eval_point_auto(const ContourTable* table, int m, const Vector& y,
                                         const Vector& t) const {
    const double ynorm = y.norm();
    const double y2 = y.squaredNorm();
    const double gnorm4 = y2 * y2 + t.squaredNorm();
    if (ynorm > 0.0 && y2 * y2 >= 1e-4 * gnorm4) // |y| >= 0.1 ||g||
        return eval_sphere(table_fine_, {m}, y, t)[0];
    if (g_.r() == 1) return eval_r1_continued({m}, y, t)[0];
    if (table) return eval_contour(*table, {m}, y, t.norm())[0];
    return p_m_continued(m, y, t);
}

MeanValueResult KernelEvaluator::mean_value_integral(int m, const MeanValueOptions& opts) const {
    const int n = g_.n(), r = g_.r();
    if (2 * n > 4)
        throw Error("mean_value_integral: supported for 2n <= 4 only");
    const SphereRule tdot_rule(r, opts.tdot_base);
    const int omega_base = opts.omega_base > 0 ? opts.omega_base : (n == 1 ? 64 : 24);
    const SphereRule omega_rule(2 * n, omega_base);
    const double split = opts.rho_split;
    Quad1D rho_lo = gauss_legendre_ab(opts.radial_nodes, 0.0, split);
    Quad1D rho_hi = gauss_legendre_ab(opts.radial_nodes, split, 1.0);
    Quad1D s_rule = gauss_legendre_ab(opts.radial_nodes, 0.0, 1.0);

    Complex total(0.0, 0.0);
    double total_abs = 0.0;
    for (int it = 0; it < tdot_rule.size(); ++it) {
        const Vector tdot = tdot_rule.nodes()[it];
        // One contour table per t direction; reused across all omega and rho.
        ContourTable table;
        if (r >= 2) {
            double eps = cfg_.epsilon;
            for (int attempt = 0;; ++attempt) {
                try {
                    table = build_contour_table(tdot, eps);
                    break;
                } catch (const SpectrumEscapedContour&) {
                    if (attempt >= 4) throw;
                    eps *= 0.5;
                }
            }
        }
        const std::size_t nom = omega_rule.size();
        std::vector<Complex> part(nom, Complex(0.0, 0.0));
        std::vector<double> part_abs(nom, 0.0);
        parallel_for(nom, [&](std::size_t iw) {
            const Vector& omega = omega_rule.nodes()[iw];
            Complex acc(0.0, 0.0);
            double acc_abs = 0.0;
            // inner |y| in (0, split): continued representation
            for (std::size_t i = 0; i < rho_lo.nodes.size(); ++i) {
                const double rho = rho_lo.nodes[i];
                const Vector yv = rho * omega;
                Complex p = (r == 1) ? eval_r1_continued({m}, yv, tdot)[0]
                                     : eval_contour(table, {m}, yv, 1.0)[0];
                const double w = rho_lo.weights[i] * std::pow(rho, 2 * n - 1);
                acc += w * p;
                acc_abs += w * std::abs(p);
            }
            // |y| in (split, 1): sphere representation
            for (std::size_t i = 0; i < rho_hi.nodes.size(); ++i) {
                const double rho = rho_hi.nodes[i];
                const Vector yv = rho * omega;
                Complex p = eval_sphere(table_fine_, {m}, yv, tdot)[0];
                const double w = rho_hi.weights[i] * std::pow(rho, 2 * n - 1);
                acc += w * p;
                acc_abs += w * std::abs(p);
            }
            // |y| > 1 folded to s in (0,1) by homogeneity
            for (std::size_t i = 0; i < s_rule.nodes.size(); ++i) {
                const double s = s_rule.nodes[i];
                Complex p = eval_sphere(table_fine_, {m}, omega, Vector(s * tdot))[0];
                const double w = 0.5 * s_rule.weights[i] * std::pow(s, r - 1);
                acc += w * p;
                acc_abs += w * std::abs(p);
            }
            part[iw] = acc;
            part_abs[iw] = acc_abs;
        });
        Complex tsum(0.0, 0.0);
        double tsum_abs = 0.0;
        for (std::size_t iw = 0; iw < nom; ++iw) {
            tsum += omega_rule.weights()[iw] * part[iw];
            tsum_abs += omega_rule.weights()[iw] * part_abs[iw];
        }
        total += tdot_rule.weights()[it] * tsum;
        total_abs += tdot_rule.weights()[it] * tsum_abs;
    }
    return MeanValueResult{total, total_abs};
}

std::vector<double> KernelEvaluator::cz_size_statistics(
    const std::vector<int>& ms, const std::vector<GroupPoint>& samples) const {
    std::vector<double> sup(ms.size(), 0.0);
    const int Q = g_.homogeneous_dim();
    for (const GroupPoint& gp : samples) {
        const double y2 = gp.y.squaredNorm();
        const double norm = std::pow(y2 * y2 + gp.t.squaredNorm(), 0.25);
        if (norm == 0.0) continue;
        auto vals = p_m_continued_batch(ms, gp.y, gp.t);
        for (std::size_t im = 0; im < ms.size(); ++im)
            sup[im] = std::max(sup[im], std::pow(norm, Q) * std::abs(vals[im]));
    }
    return sup;
}

double KernelEvaluator::cz_size_statistic(int m, const std::vector<GroupPoint>& samples) const {
    return cz_size_statistics({m}, samples)[0];
}

std::vector<double> KernelEvaluator::cz_gradient_statistics(
    const std::vector<int>& ms, const std::vector<GroupPoint>& samples, double h_rel) const {
    const int Q = g_.homogeneous_dim();
    const int d = g_.horizontal_dim();
    std::vector<double> sup(ms.size(), 0.0);
    for (const GroupPoint& gp : samples) {
        const double y2 = gp.y.squaredNorm();
        const double norm = std::pow(y2 * y2 + gp.t.squaredNorm(), 0.25);
        if (norm == 0.0) continue;
        const double h = h_rel * norm;
        // On the y = 0 line the stencil leaves t untouched (B(0, e_j) = 0),
        // so one contour table serves every stencil evaluation.
        ContourTable table;
        const ContourTable* table_ptr = nullptr;
        if (gp.y.norm() == 0.0 && g_.r() >= 2 && gp.t.norm() > 0.0) {
            const Vector t_dir = gp.t / gp.t.norm();
            double eps = cfg_.epsilon;
            for (int attempt = 0;; ++attempt) {
                try {
                    table = build_contour_table(t_dir, eps);
                    break;
                } catch (const SpectrumEscapedContour&) {
                    if (attempt >= 4) throw;
                    eps *= 0.5;
                }
            }
            table_ptr = &table;
        }
        for (std::size_t im = 0; im < ms.size(); ++im) {
            const int m = ms[im];
            double worst = 0.0;
            for (int j = 0; j < d; ++j) {
                Vector ej = Vector::Zero(d);
                ej[j] = 1.0;
                const Vector bj = g_.bilinear(gp.y, ej);
                auto eval_at = [&](double s) {
                    Vector yv = gp.y + s * ej;
                    Vector tv = gp.t + 2.0 * s * bj;
                    return eval_point_auto(table_ptr, m, yv, tv);
                };
                Complex der = (-eval_at(2.0 * h) + 8.0 * eval_at(h) - 8.0 * eval_at(-h) +
                               eval_at(-2.0 * h)) /
                              (12.0 * h);
                worst = std::max(worst, std::abs(der));
            }
            sup[im] = std::max(sup[im], std::pow(norm, Q + 1) * worst);
        }
    }
    return sup;
}

double KernelEvaluator::cz_gradient_statistic(int m, const std::vector<GroupPoint>& samples,
                                              double h_rel) const {
    return cz_gradient_statistics({m}, samples, h_rel)[0];
}

} // namespace specproj
