#pragma once

#include <functional>
#include <memory>

#include "specproj/grid.hpp"
#include "specproj/group.hpp"
#include "specproj/laguerre.hpp"
#include "specproj/tau.hpp"

namespace specproj {

/// Grid-based machinery: partial Fourier transform in t, twisted convolution
/// in y, application of the projection operators, Abel reconstruction.
///
/// tau slices are processed concurrently; every reduction runs in a fixed
/// order so results do not depend on the worker count.
class ProjectionEngine {
  public:
    ProjectionEngine(const GroupDescriptor& g, Grid grid, std::size_t workers = 0);
    ~ProjectionEngine();
    ProjectionEngine(const ProjectionEngine&) = delete;
    ProjectionEngine& operator=(const ProjectionEngine&) = delete;

    const Grid& grid() const { return grid_; }
    const GroupDescriptor& group() const { return g_; }

    /// phi~(y, tau) = int e^{-i tau.t} phi(y, t) dt (Riemann-sum scaling).
    SampledFunction partial_fourier(const SampledFunction& f) const;
    SampledFunction inverse_partial_fourier(const SampledFunction& f) const;

    /// Twisted convolution of two y-slices: direct lattice sum times the y
    /// cell volume; a 2n = 2 FFT factorization is used unless force_direct.
    std::vector<Complex> twisted_convolve(const std::vector<Complex>& f,
                                          const std::vector<Complex>& g, const Vector& tau,
                                          bool force_direct = false) const;

    /// P_m f via per-slice twisted convolution with Q_m(., tau).
    SampledFunction apply_projection(const SampledFunction& f, int m) const;

    /// sum_{m<=M} R^m P_m f in one pass; M < 0 selects the closed-form
    /// generating kernel (M = infinity).
    SampledFunction abel_reconstruct(const SampledFunction& f, double R, int M) const;

    /// ||P_m f||^2 for m = 0..M without leaving the (y, tau) domain.
    std::vector<double> projection_energies(const SampledFunction& f, int M) const;

    /// Q_m(., tau) sampled on the y grid.
    std::vector<Complex> qm_slice(int m, const Vector& tau) const;

    /// Relative slice-skip threshold for negligible tau slices (0 disables).
    void set_slice_skip(double rel) { slice_skip_ = rel; }

  private:
    struct Fft;
    std::vector<Complex> convolve_slices(const SampledFunction& ft,
                                         const std::function<std::vector<Complex>(const Vector&)>&
                                             kernel_of_tau) const;
    std::vector<Complex> twisted_direct(const std::vector<Complex>& f,
                                        const std::vector<Complex>& g, const Vector& tau) const;
    std::vector<Complex> twisted_fast2d(const std::vector<Complex>& f,
                                        const std::vector<Complex>& g, const Vector& tau) const;

    const GroupDescriptor& g_;
    Grid grid_;
    std::size_t workers_;
    double slice_skip_ = 1e-14;
    mutable TauCache tau_cache_;
    std::unique_ptr<Fft> fft_;
};

/// Sample a function handle over the grid (YT space).
SampledFunction sample_function(const Grid& grid,
                                const std::function<Complex(const Vector&, const Vector&)>& fn);

} // namespace specproj
