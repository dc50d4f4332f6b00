#include "specproj/engine.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "specproj/threads.hpp"

namespace specproj {

/// Shared FFTW plans (created with FFTW_UNALIGNED so they run on any buffer).
struct ProjectionEngine::Fft {
    fftw_plan fwd_t = nullptr, bwd_t = nullptr; // length t_points
    fftw_plan fwd_c = nullptr, bwd_c = nullptr; // length 2 * y_points
    int nt = 0, nc = 0;

    Fft(int t_points, int y_points) : nt(t_points), nc(2 * y_points) {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        std::vector<Complex> a(std::max(nt, nc)), b(std::max(nt, nc));
        auto* pa = reinterpret_cast<fftw_complex*>(a.data());
        auto* pb = reinterpret_cast<fftw_complex*>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_t = fftw_plan_dft_1d(nt, pa, pb, FFTW_FORWARD, flags);
        bwd_t = fftw_plan_dft_1d(nt, pa, pb, FFTW_BACKWARD, flags);
        fwd_c = fftw_plan_dft_1d(nc, pa, pb, FFTW_FORWARD, flags);
        bwd_c = fftw_plan_dft_1d(nc, pa, pb, FFTW_BACKWARD, flags);
    }
    ~Fft() {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(fwd_t);
        fftw_destroy_plan(bwd_t);
        fftw_destroy_plan(fwd_c);
        fftw_destroy_plan(bwd_c);
    }
    static void run(fftw_plan p, Complex* in, Complex* out) {
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }
};

ProjectionEngine::ProjectionEngine(const GroupDescriptor& g, Grid grid, std::size_t workers)
    : g_(g), grid_(grid), workers_(resolve_workers(workers)), tau_cache_(g) {
    grid_.validate();
    if (grid_.horizontal_dim != g.horizontal_dim() || grid_.central_dim != g.r())
        throw GridMismatch("engine: grid dimensions do not match the group");
    fft_ = std::make_unique<Fft>(grid_.t_points, grid_.y_points);
}

ProjectionEngine::~ProjectionEngine() = default;

namespace {

/// One shifted DFT along a single t axis for every line of the array.
/// Both grids are offset by s = (1-N)/2 cells; the shift phases implement
/// out[k] = scale * pre_k * sum_j e^{-+2 pi i kj/N} (pre_j in[j]).
void shifted_fft_axis(std::vector<Complex>& data, int axis, const Grid& grid, bool forward,
                      fftw_plan plan, std::size_t workers) {
    const int N = grid.t_points;
    const int r = grid.central_dim;
    const std::size_t ysize = grid.y_size();
    const double s = 0.5 * (1.0 - N);
    const double sign = forward ? -1.0 : 1.0;

    std::vector<Complex> shift(N), corner(N);
    for (int j = 0; j < N; ++j) shift[j] = std::polar(1.0, sign * 2.0 * M_PI * s * j / N);
    const Complex s2 = std::polar(1.0, sign * 2.0 * M_PI * s * s / N);
    const double scale = forward ? grid.t_spacing() : grid.tau_spacing() / (2.0 * M_PI);

    // Lines along `axis`: stride and count over the remaining indices.
    std::size_t stride = ysize;
    for (int a = r - 1; a > axis; --a) stride *= N;
    const std::size_t nlines = grid.total() / N;

    parallel_for(nlines, [&](std::size_t line) {
        // Decompose line index into (outer block, inner offset).
        const std::size_t inner = line % stride;
        const std::size_t outer = line / stride;
        Complex* base = data.data() + outer * stride * N + inner;
        std::vector<Complex> in(N), out(N);
        for (int j = 0; j < N; ++j) in[j] = base[j * stride] * shift[j];
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
        for (int k = 0; k < N; ++k) base[k * stride] = scale * s2 * shift[k] * out[k];
    }, workers);
}

} // namespace

SampledFunction ProjectionEngine::partial_fourier(const SampledFunction& f) const {
    if (f.space != Space::YT) throw WrongSpace("partial_fourier: expected (y,t) samples");
    if (!(f.grid == grid_)) throw GridMismatch("partial_fourier: grid mismatch");
    SampledFunction out = f;
    out.space = Space::YTau;
    for (int axis = 0; axis < grid_.central_dim; ++axis)
        shifted_fft_axis(out.values, axis, grid_, true, fft_->fwd_t, workers_);
    return out;
}

SampledFunction ProjectionEngine::inverse_partial_fourier(const SampledFunction& f) const {
    if (f.space != Space::YTau)
        throw WrongSpace("inverse_partial_fourier: expected (y,tau) samples");
    if (!(f.grid == grid_)) throw GridMismatch("inverse_partial_fourier: grid mismatch");
    SampledFunction out = f;
    out.space = Space::YT;
    for (int axis = 0; axis < grid_.central_dim; ++axis)
        shifted_fft_axis(out.values, axis, grid_, false, fft_->bwd_t, workers_);
    return out;
}

std::vector<Complex> ProjectionEngine::twisted_direct(const std::vector<Complex>& f,
                                                      const std::vector<Complex>& g,
                                                      const Vector& tau) const {
    const int d = grid_.horizontal_dim;
    const int N = grid_.y_points;
    const std::size_t ys = grid_.y_size();
    if (f.size() != ys || g.size() != ys)
        throw GridMismatch("twisted_convolve: slice size mismatch");
    const Matrix Bt = b_tau(g_, tau);

    std::vector<double> coord(N);
    for (int i = 0; i < N; ++i) coord[i] = grid_.y_coord(i);

    // Phase tables per nonzero tensor entry: T[a][b][ia][jb] = exp(-2i c is).
    struct Tab {
        int a, b;
        std::vector<Complex> val; // N x N
    };
    std::vector<Tab> tabs;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (Bt(a, b) == 0.0) continue;
            Tab t{a, b, std::vector<Complex>(static_cast<std::size_t>(N) * N)};
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    t.val[static_cast<std::size_t>(i) * N + j] =
                        std::polar(1.0, -2.0 * coord[i] * Bt(a, b) * coord[j]);
            tabs.push_back(std::move(t));
        }

    std::vector<Complex> out(ys, Complex(0.0, 0.0));
    const double cell = grid_.y_cell();
    parallel_for(ys, [&](std::size_t iflat) {
        std::vector<int> ii(d), jj(d);
        std::size_t rem = iflat;
        for (int a = d - 1; a >= 0; --a) {
            ii[a] = static_cast<int>(rem % N);
            rem /= N;
        }
        Complex acc(0.0, 0.0);
        for (std::size_t jflat = 0; jflat < ys; ++jflat) {
            std::size_t rj = jflat;
            bool in_range = true;
            std::size_t kflat = 0;
            for (int a = d - 1, mul = 1; a >= 0; --a, mul *= N) {
                jj[a] = static_cast<int>(rj % N);
                rj /= N;
                int k = ii[a] - jj[a] + N / 2;
                if (k < 0 || k >= N) {
                    in_range = false;
                    break;
                }
                kflat += static_cast<std::size_t>(k) * static_cast<std::size_t>(mul);
            }
            if (!in_range) continue;
            Complex phase(1.0, 0.0);
            for (const Tab& t : tabs)
                phase *= t.val[static_cast<std::size_t>(ii[t.a]) * N + jj[t.b]];
            acc += phase * f[kflat] * g[jflat];
        }
        out[iflat] = cell * acc;
    }, workers_);
    return out;
}

std::vector<Complex> ProjectionEngine::twisted_fast2d(const std::vector<Complex>& f,
                                                      const std::vector<Complex>& g,
                                                      const Vector& tau) const {
    // 2n = 2 factorization: the phase exp(-2i tau (y1 x2 - y2 x1)) splits as
    // W[i1][j2] conj(W[i2][j1]); the j2 sum becomes a padded linear
    // correlation done by FFT, the j1 contraction stays direct.
    const int N = grid_.y_points;
    const std::size_t ys = grid_.y_size();
    if (f.size() != ys || g.size() != ys)
        throw GridMismatch("twisted_convolve: slice size mismatch");
    const Matrix Bt = b_tau(g_, tau);
    const double c = Bt(0, 1); // B^tau = [[0, c], [-c, 0]]
    const int L = 2 * N;

    std::vector<double> coord(N);
    for (int i = 0; i < N; ++i) coord[i] = grid_.y_coord(i);
    std::vector<Complex> W(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            W[static_cast<std::size_t>(a) * N + b] = std::polar(1.0, -2.0 * coord[a] * c * coord[b]);

    // FFTs of the zero-padded f rows.
    std::vector<Complex> fhat(static_cast<std::size_t>(N) * L);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
        std::vector<Complex> in(L, Complex(0.0, 0.0));
        for (int j = 0; j < N; ++j) in[j] = f[row * N + j];
        Fft::run(fft_->fwd_c, in.data(), fhat.data() + row * L);
    }, workers_);

    std::vector<Complex> out(ys, Complex(0.0, 0.0));
    const double cell = grid_.y_cell() / L; // unnormalized inverse FFT
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i1) {
        std::vector<Complex> in(L), spec(L), crow(L);
        std::vector<Complex> D(static_cast<std::size_t>(N) * N); // [j1][i2]
        const Complex* Wi1 = W.data() + i1 * N;
        for (int j1 = 0; j1 < N; ++j1) {
            const int k1 = static_cast<int>(i1) - j1 + N / 2;
            if (k1 < 0 || k1 >= N) {
                std::fill(D.begin() + static_cast<std::size_t>(j1) * N,
                          D.begin() + static_cast<std::size_t>(j1 + 1) * N, Complex(0.0, 0.0));
                continue;
            }
            std::fill(in.begin(), in.end(), Complex(0.0, 0.0));
            const Complex* grow = g.data() + static_cast<std::size_t>(j1) * N;
            for (int j2 = 0; j2 < N; ++j2) in[j2] = Wi1[j2] * grow[j2];
            Fft::run(fft_->fwd_c, in.data(), spec.data());
            const Complex* fr = fhat.data() + static_cast<std::size_t>(k1) * L;
            for (int l = 0; l < L; ++l) spec[l] *= fr[l];
            Fft::run(fft_->bwd_c, spec.data(), crow.data());
            // c[l] = sum_j2 u[j2] f[k1][l - j2]; need l = i2 + N/2.
            Complex* Drow = D.data() + static_cast<std::size_t>(j1) * N;
            for (int i2 = 0; i2 < N; ++i2) Drow[i2] = crow[i2 + N / 2];
        }
        Complex* orow = out.data() + i1 * N;
        for (int i2 = 0; i2 < N; ++i2) {
            const Complex* Wi2 = W.data() + static_cast<std::size_t>(i2) * N;
            Complex acc(0.0, 0.0);
            for (int j1 = 0; j1 < N; ++j1)
                acc += std::conj(Wi2[j1]) * D[static_cast<std::size_t>(j1) * N + i2];
            orow[i2] = cell * acc;
        }
    }, workers_);
    return out;
}

std::vector<Complex> ProjectionEngine::twisted_convolve(const std::vector<Complex>& f,
                                                        const std::vector<Complex>& g,
                                                        const Vector& tau,
                                                        bool force_direct) const {
    if (grid_.horizontal_dim == 2 && !force_direct) return twisted_fast2d(f, g, tau);
    return twisted_direct(f, g, tau);
}

std::vector<Complex> ProjectionEngine::qm_slice(int m, const Vector& tau) const {
    const TauSpectrum& spec = tau_cache_.get(tau);
    const std::size_t ys = grid_.y_size();
    std::vector<Complex> q(ys);
    for (std::size_t i = 0; i < ys; ++i) q[i] = q_m(g_, spec, m, grid_.y_point(i));
    return q;
}

std::vector<Complex> ProjectionEngine::convolve_slices(
    const SampledFunction& ft,
    const std::function<std::vector<Complex>(const Vector&)>& kernel_of_tau) const {
    const std::size_t ys = grid_.y_size();
    const std::size_t nslices = grid_.t_size();

    // Slice input norms for the negligible-slice skip.
    std::vector<double> norms(nslices, 0.0);
    double max_norm = 0.0;
    for (std::size_t s = 0; s < nslices; ++s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ys; ++i) acc += std::norm(ft.values[s * ys + i]);
        norms[s] = std::sqrt(acc);
        max_norm = std::max(max_norm, norms[s]);
    }

    std::vector<Complex> out(ft.values.size(), Complex(0.0, 0.0));
    // The slice loop is serial; the convolution inside parallelizes. This
    // keeps peak memory flat and the output deterministic.
    for (std::size_t s = 0; s < nslices; ++s) {
        if (slice_skip_ > 0.0 && norms[s] <= slice_skip_ * max_norm) continue;
        const Vector tau = grid_.tau_point(s);
        std::vector<Complex> kernel = kernel_of_tau(tau);
        std::vector<Complex> fslice(ft.values.begin() + s * ys,
                                    ft.values.begin() + (s + 1) * ys);
        std::vector<Complex> conv = twisted_convolve(fslice, kernel, tau);
        std::copy(conv.begin(), conv.end(), out.begin() + s * ys);
    }
    return out;
}

SampledFunction ProjectionEngine::apply_projection(const SampledFunction& f, int m) const {
    SampledFunction ft = f.space == Space::YTau ? f : partial_fourier(f);
    SampledFunction conv = ft;
    conv.values = convolve_slices(ft, [&](const Vector& tau) { return qm_slice(m, tau); });
    SampledFunction out = inverse_partial_fourier(conv);
    return f.space == Space::YTau ? conv : out;
}

SampledFunction ProjectionEngine::abel_reconstruct(const SampledFunction& f, double R,
                                                   int M) const {
    if (R < 0.0 || R >= 1.0) throw RNotInRange("abel_reconstruct: R must be in [0, 1)");
    SampledFunction ft = f.space == Space::YTau ? f : partial_fourier(f);
    const std::size_t ys = grid_.y_size();
    auto kernel = [&](const Vector& tau) {
        const TauSpectrum& spec = tau_cache_.get(tau);
        std::vector<Complex> k(ys);
        if (M < 0) {
            for (std::size_t i = 0; i < ys; ++i)
                k[i] = q_abel(g_, spec, R, grid_.y_point(i));
        } else {
            const int n = g_.n();
            const double pref = std::pow(2.0 / M_PI, n) * spec.det_sqrt;
            for (std::size_t i = 0; i < ys; ++i) {
                const double sigma = spec.form(grid_.y_point(i));
                // sum_{m<=M} R^m L_m^{(n-1)}(2 sigma) via the recurrence
                double sum = 1.0; // m = 0 term
                if (M >= 1) {
                    double lm1 = 1.0;
                    double lm = n - 2.0 * sigma; // L_1^{(n-1)}(2 sigma)
                    double Rm = R;
                    sum += Rm * lm;
                    for (int m = 1; m < M; ++m) {
                        double next = ((2.0 * m + n - 2.0 * sigma) * lm - (m + n - 1.0) * lm1) /
                                      (m + 1.0);
                        lm1 = lm;
                        lm = next;
                        Rm *= R;
                        sum += Rm * lm;
                    }
                }
                k[i] = pref * std::exp(-sigma) * sum;
            }
        }
        return k;
    };
    SampledFunction conv = ft;
    conv.values = convolve_slices(ft, kernel);
    SampledFunction out = inverse_partial_fourier(conv);
    return f.space == Space::YTau ? conv : out;
}

std::vector<double> ProjectionEngine::projection_energies(const SampledFunction& f,
                                                          int M) const {
    SampledFunction ft = f.space == Space::YTau ? f : partial_fourier(f);
    const std::size_t ys = grid_.y_size();
    const std::size_t nslices = grid_.t_size();
    const double cell = grid_.y_cell() * grid_.tau_cell() / std::pow(2.0 * M_PI, g_.r());

    std::vector<double> energies(M + 1, 0.0);
    for (int m = 0; m <= M; ++m) {
        SampledFunction conv = ft;
        conv.values = convolve_slices(ft, [&](const Vector& tau) { return qm_slice(m, tau); });
        double acc = 0.0;
        for (std::size_t i = 0; i < nslices * ys; ++i) acc += std::norm(conv.values[i]);
        energies[m] = cell * acc;
    }
    return energies;
}

SampledFunction sample_function(
    const Grid& grid, const std::function<Complex(const Vector&, const Vector&)>& fn) {
    SampledFunction f = SampledFunction::zeros(grid, Space::YT);
    const std::size_t ys = grid.y_size();
    for (std::size_t s = 0; s < grid.t_size(); ++s) {
        const Vector tv = grid.t_point(s);
        for (std::size_t i = 0; i < ys; ++i) f.values[s * ys + i] = fn(grid.y_point(i), tv);
    }
    return f;
}

} // namespace specproj
