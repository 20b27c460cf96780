#include "riscov/bound.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace riscov {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex g_fftw_plan_mutex;

double trapezoid_weight(std::size_t i, std::size_t n, double spacing) {
    return (i == 0 || i + 1 == n) ? 0.5 * spacing : spacing;
}

DiscretePdf from_masses(std::vector<double> mass, double spacing) {
    double total = 0.0;
    for (double& m : mass) {
        m = std::max(m, 0.0);
        total += m;
    }
    if (!(total > 0.0)) {
        throw std::runtime_error("DiscretePdf: no probability mass on the grid");
    }
    DiscretePdf pdf;
    pdf.spacing = spacing;
    pdf.grid.resize(mass.size());
    pdf.density.resize(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
        pdf.grid[i] = static_cast<double>(i) * spacing;
        pdf.density[i] = mass[i] / total / trapezoid_weight(i, mass.size(), spacing);
    }
    return pdf;
}

std::vector<double> to_masses(const DiscretePdf& pdf) {
    std::vector<double> mass(pdf.size());
    for (std::size_t i = 0; i < pdf.size(); ++i) {
        mass[i] = pdf.density[i] * trapezoid_weight(i, pdf.size(), pdf.spacing);
    }
    return mass;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

void BoundParams::validate() const {
    const bool ok = lambda_bl >= 0.0 && l_bar > 0.0 && w_bar > 0.0 && h_min > 0.0 && h_min <= h_max &&
                    r > 0.0 && d_rs > 0.0 && d_rs_xy >= 0.0 && d_rs >= d_rs_xy && eta1 > 0.0 &&
                    eta1 <= 1.0 && eta2 > 0.0 && eta2 <= 1.0 && p_t > 0.0 && d_const > 0.0 && n_r >= 1;
    if (!ok) {
        throw std::invalid_argument("BoundParams: invalid parameter set");
    }
}

double DiscretePdf::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        s += density[i] * trapezoid_weight(i, size(), spacing);
    }
    return s;
}

double DiscretePdf::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        s += grid[i] * density[i] * trapezoid_weight(i, size(), spacing);
    }
    return s / integral();
}

double DiscretePdf::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double d = grid[i] - mu;
        s += d * d * density[i] * trapezoid_weight(i, size(), spacing);
    }
    return s / integral();
}

BlockageCoeffs blockage_coeffs(double lambda_bl, double w_bar, double l_bar) {
    return {2.0 * lambda_bl * (w_bar + l_bar) / std::numbers::pi, lambda_bl * w_bar * l_bar};
}

double los_probability(double r_dist, double beta, double p, double eta) {
    return eta * std::exp(-(beta * r_dist + p));
}

double dist_xy_pdf(double r_dist, double big_r) {
    if (!(big_r > 0.0)) {
        throw std::invalid_argument("dist_xy_pdf: R must be positive");
    }
    return (r_dist >= 0.0 && r_dist < big_r) ? 2.0 * r_dist / (big_r * big_r) : 0.0;
}

double bound_scale(const BoundParams& bp) {
    bp.validate();
    const auto [beta, p] = blockage_coeffs(bp.lambda_bl, bp.w_bar, bp.l_bar);
    return bp.eta1 * bp.eta2 * bp.p_t * std::exp(-beta * bp.d_rs_xy - 2.0 * p) * bp.d_const /
           (4.0 * bp.d_rs * bp.d_rs);
}

double single_ris_min_power(const BoundParams& bp) {
    const double beta = blockage_coeffs(bp.lambda_bl, bp.w_bar, bp.l_bar).beta;
    return bound_scale(bp) * std::exp(-beta * bp.r) / (bp.r * bp.r + bp.h_max * bp.h_max);
}

double single_ris_max_power(const BoundParams& bp) {
    return bound_scale(bp) / (bp.h_min * bp.h_min);
}

DiscretePdf single_ris_power_pdf(const BoundParams& bp, std::size_t grid_size) {
    bp.validate();
    if (grid_size < 256) {
        throw std::invalid_argument("single_ris_power_pdf: grid_size must be >= 256");
    }
    const double big_b = bound_scale(bp);
    const double beta = blockage_coeffs(bp.lambda_bl, bp.w_bar, bp.l_bar).beta;
    const double top = single_ris_max_power(bp);
    const double spacing = top / static_cast<double>(grid_size - 1);
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("single_ris_power_pdf: degenerate power grid");
    }

    // Midpoint rule in u = (d_xy / R)^2, which is uniform on [0, 1), and in d_h.
    const std::size_t n_u = 16 * grid_size;
    const std::size_t n_h = (bp.h_max > bp.h_min) ? 64 : 1;
    const double w = 1.0 / static_cast<double>(n_u * n_h);
    std::vector<double> mass(grid_size, 0.0);
    for (std::size_t a = 0; a < n_u; ++a) {
        const double d_xy = bp.r * std::sqrt((static_cast<double>(a) + 0.5) / static_cast<double>(n_u));
        const double radial = big_b * std::exp(-beta * d_xy);
        for (std::size_t b = 0; b < n_h; ++b) {
            const double d_h = bp.h_min + (bp.h_max - bp.h_min) * (static_cast<double>(b) + 0.5) / static_cast<double>(n_h);
            const double pos = radial / (d_xy * d_xy + d_h * d_h) / spacing;
            const auto i = std::min(static_cast<std::size_t>(pos), grid_size - 2);
            const double frac = std::min(pos - static_cast<double>(i), 1.0);
            mass[i] += w * (1.0 - frac);
            mass[i + 1] += w * frac;
        }
    }
    return from_masses(std::move(mass), spacing);
}

DiscretePdf convolve_n(const DiscretePdf& pdf, std::size_t n_r) {
    if (n_r < 1) {
        throw std::invalid_argument("convolve_n: n_r must be >= 1");
    }
    if (n_r == 1) {
        return pdf;
    }
    const std::size_t n = pdf.size();
    const std::size_t out_n = n_r * (n - 1) + 1;
    const std::size_t fft_n = next_pow2(out_n);
    const std::size_t spec_n = fft_n / 2 + 1;

    std::unique_ptr<double, FftwFree> real(static_cast<double*>(fftw_malloc(sizeof(double) * fft_n)));
    std::unique_ptr<fftw_complex, FftwFree> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_n)));
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    {
        std::lock_guard lock(g_fftw_plan_mutex);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(fft_n), real.get(), spec.get(), FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(fft_n), spec.get(), real.get(), FFTW_ESTIMATE);
    }

    const std::vector<double> mass = to_masses(pdf);
    std::fill(real.get(), real.get() + fft_n, 0.0);
    std::copy(mass.begin(), mass.end(), real.get());
    fftw_execute(fwd);
    // The n_r-fold discrete convolution of the mass vector is the n_r-th power of its spectrum.
    for (std::size_t f = 0; f < spec_n; ++f) {
        std::complex<double> z(spec.get()[f][0], spec.get()[f][1]);
        z = std::pow(z, static_cast<int>(n_r));
        spec.get()[f][0] = z.real();
        spec.get()[f][1] = z.imag();
    }
    fftw_execute(inv);

    std::vector<double> out(out_n);
    for (std::size_t i = 0; i < out_n; ++i) {
        out[i] = real.get()[i] / static_cast<double>(fft_n);
    }
    {
        std::lock_guard lock(g_fftw_plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    return from_masses(std::move(out), pdf.spacing);
}

double coverage_probability(const DiscretePdf& pdf, double epsilon) {
    const std::size_t n = pdf.size();
    if (n == 0) {
        return 0.0;
    }
    if (epsilon >= pdf.grid.back()) {
        return 0.0;
    }
    double tail = 0.0;
    if (epsilon <= pdf.grid.front()) {
        tail = pdf.integral();
    } else {
        const auto i = static_cast<std::size_t>((epsilon - pdf.grid.front()) / pdf.spacing);
        const std::size_t lo = std::min(i, n - 2);
        const double frac = (epsilon - pdf.grid[lo]) / pdf.spacing;
        const double f_eps = pdf.density[lo] + frac * (pdf.density[lo + 1] - pdf.density[lo]);
        tail = 0.5 * (f_eps + pdf.density[lo + 1]) * (pdf.grid[lo + 1] - epsilon);
        for (std::size_t k = lo + 1; k + 1 < n; ++k) {
            tail += 0.5 * (pdf.density[k] + pdf.density[k + 1]) * pdf.spacing;
        }
    }
    return std::clamp(tail, 0.0, 1.0);
}

double bound_coverage(const BoundParams& bp, double epsilon, std::size_t grid_size) {
    return coverage_probability(convolve_n(single_ris_power_pdf(bp, grid_size), bp.n_r), epsilon);
}

double monte_carlo_bound(const BoundParams& bp, double epsilon, std::size_t samples, Rng& rng) {
    if (samples < 100000) {
        throw std::invalid_argument("monte_carlo_bound: at least 1e5 samples required");
    }
    const double big_b = bound_scale(bp);
    const double beta = blockage_coeffs(bp.lambda_bl, bp.w_bar, bp.l_bar).beta;
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (std::size_t k = 0; k < bp.n_r; ++k) {
            const double d_xy = bp.r * std::sqrt(uniform01(rng));
            const double d_h = uniform(rng, bp.h_min, bp.h_max);
            sum += big_b * std::exp(-beta * d_xy) / (d_xy * d_xy + d_h * d_h);
        }
        if (sum > epsilon) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace riscov
