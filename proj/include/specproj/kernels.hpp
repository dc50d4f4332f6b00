#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "specproj/group.hpp"
#include "specproj/quadrature.hpp"
#include "specproj/tau.hpp"

namespace specproj {

/// Numerical parameters for kernel evaluation.
struct KernelConfig {
    double epsilon = 0.1;         // contour height; halved on escape, up to 4 times
    int sphere_degree = 128;      // base order of the S^{r-1} rule
    int radial_nodes = 96;        // Gauss-Laguerre order of the radial oracle
    int m_max = 60;
    double quad_tol = 1e-7;       // coarse/fine agreement tolerance in p_m
    int gamma_nodes_per_side = 32;// Gauss-Legendre nodes per gamma contour panel
    int contour_nodes = 64;       // nodes along the deformed (-1,1) contour
    bool check_convergence = false;
};

/// C_{m,j} = (-1)^m 2^{n-r}/pi^{n+r} binom(r,j) (m+n+r-1-j)!/(m-j)!,
/// zero when j > m.
double c_mj(int n, int r, int m, int j);

struct MeanValueResult {
    Complex value;
    double abs_integral; // same quadrature applied to |P_m|
};

struct MeanValueOptions {
    int tdot_base = 32;   // base order of the S^{r-1} rule in the t variable
    int omega_base = 0;   // base order of the S^{2n-1} rule; 0 = auto
    int radial_nodes = 16;
    double rho_split = 0.5; // below this |y| the contour representation is used
};

/// Evaluates the spectral projection kernels P_m of one group. Sphere-rule
/// spectral tables are precomputed once per instance; all evaluation methods
/// are const and safe to call concurrently.
class KernelEvaluator {
  public:
    KernelEvaluator(const GroupDescriptor& g, KernelConfig cfg = {});
    KernelEvaluator(const KernelEvaluator&) = delete;
    KernelEvaluator& operator=(const KernelEvaluator&) = delete;

    const GroupDescriptor& group() const { return g_; }
    const KernelConfig& config() const { return cfg_; }
    const SphereRule& rule() const { return rule_; }

    /// Sphere-quadrature representation (fine rule). Requires y != 0. When
    /// cfg.check_convergence is set, compares coarse and fine rules and
    /// throws QuadratureNotConverged on disagreement.
    Complex p_m(int m, const Vector& y, const Vector& t) const;
    std::vector<Complex> p_m_batch(const std::vector<int>& ms, const Vector& y,
                                   const Vector& t) const;
    /// (coarse, fine) values for refinement studies.
    std::pair<Complex, Complex> p_m_levels(int m, const Vector& y, const Vector& t) const;

    /// Independent radial-integral oracle (sphere rule x Gauss-Laguerre).
    Complex p_m_oracle(int m, const Vector& y, const Vector& t) const;

    /// Analytic-continuation representation; valid for (y,t) != 0, including
    /// y = 0 when t != 0.
    Complex p_m_continued(int m, const Vector& y, const Vector& t) const;
    std::vector<Complex> p_m_continued_batch(const std::vector<int>& ms, const Vector& y,
                                             const Vector& t) const;

    /// Abel-summed kernel sum_m R^m P_m in closed form, 0 <= R < 1, y != 0.
    Complex abel_kernel(double R, const Vector& y, const Vector& t) const;

    /// mu = int_{S^{r-1}} int_{R^{2n}} P_m(y, t_dot) dy dt_dot, expected ~ 0.
    MeanValueResult mean_value_integral(int m, const MeanValueOptions& opts = {}) const;

    /// sup over samples of ||g||^Q |P_m(g)| via the continued representation;
    /// one value per requested m (the per-sample contour data is shared).
    std::vector<double> cz_size_statistics(const std::vector<int>& ms,
                                           const std::vector<GroupPoint>& samples) const;
    double cz_size_statistic(int m, const std::vector<GroupPoint>& samples) const;

    /// sup over samples of ||g||^{Q+1} max_j |Y_j P_m(g)| with 4th-order
    /// finite differences along the horizontal directions, step h_rel * ||g||.
    std::vector<double> cz_gradient_statistics(const std::vector<int>& ms,
                                               const std::vector<GroupPoint>& samples,
                                               double h_rel = 1e-3) const;
    double cz_gradient_statistic(int m, const std::vector<GroupPoint>& samples,
                                 double h_rel = 1e-3) const;

  private:
    struct NodeTable {
        const SphereRule* rule = nullptr;
        std::vector<double> det;
        std::vector<Matrix> form;
    };

    /// Complex spectral data along the deformed contour for one t-direction.
    struct ContourTable {
        std::vector<Complex> z;
        std::vector<Complex> weight; // contour weight x sub-sphere weight
        std::vector<Complex> det;
        std::vector<ComplexMatrix> form;
    };

    NodeTable build_table(const SphereRule& rule) const;
    ContourTable build_contour_table(const Vector& t_dir, double eps) const;
    std::vector<Complex> eval_sphere(const NodeTable& table, const std::vector<int>& ms,
                                     const Vector& y, const Vector& t) const;
    std::vector<Complex> eval_contour(const ContourTable& table, const std::vector<int>& ms,
                                      const Vector& y, double t_norm) const;
    std::vector<Complex> eval_r1_continued(const std::vector<int>& ms, const Vector& y,
                                           const Vector& t) const;
    Complex eval_point_auto(const ContourTable* table, int m, const Vector& y,
                            const Vector& t) const;

    const GroupDescriptor& g_;
    KernelConfig cfg_;
    SphereRule rule_;
    SphereRule rule_fine_;
    NodeTable table_;
    NodeTable table_fine_;
    GammaContour gamma_;
    Quad1D radial_;
};

} // namespace specproj
