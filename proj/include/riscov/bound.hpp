#pragma once

#include <cstddef>
#include <vector>

#include "riscov/random.hpp"

namespace riscov {

/// Inputs of the stochastic-geometry lower bound on NLoS coverage.
///
/// Blockages follow a line Boolean model with midpoint density lambda_bl and mean
/// footprint l_bar x w_bar. The RIS-user horizontal distance has density 2r/R^2 on
/// [0, R), the RIS height is uniform on [h_min, h_max], and the satellite hop
/// (d_rs, d_rs_xy) is treated as constant over the region.
struct BoundParams {
    double lambda_bl = 1e-4;  // per m^2
    double l_bar = 35.0;      // m
    double w_bar = 35.0;      // m
    double h_min = 80.0;      // m
    double h_max = 120.0;     // m
    double r = 500.0;         // region radius R, m
    double d_rs = 1.2e6;      // m
    double d_rs_xy = 0.0;     // m
    double eta1 = 1.0;
    double eta2 = 1.0;
    double p_t = 1.0;         // W
    double d_const = 1.0;     // cascade constant D
    std::size_t n_r = 1;

    void validate() const;
};

struct BlockageCoeffs {
    double beta = 0.0;
    double p = 0.0;
};

/// Density tabulated on the uniform grid x_i = i * spacing, i = 0..n-1.
struct DiscretePdf {
    std::vector<double> grid;
    std::vector<double> density;
    double spacing = 0.0;

    std::size_t size() const { return grid.size(); }
    double integral() const;  // trapezoidal
    double mean() const;
    double variance() const;
};

/// beta = 2 lambda (W + L) / pi, p = lambda W L.
BlockageCoeffs blockage_coeffs(double lambda_bl, double w_bar, double l_bar);

/// eta * exp(-(beta r + p)).
double los_probability(double r_dist, double beta, double p, double eta);

/// 2r/R^2 on [0, R), zero elsewhere.
double dist_xy_pdf(double r_dist, double big_r);

/// B = eta1 eta2 P_t exp(-beta d_rs_xy - 2p) D / (4 d_rs^2); the 1/4 is E[delta1] E[delta2].
double bound_scale(const BoundParams& bp);

/// Smallest and largest attainable single-RIS average power.
double single_ris_min_power(const BoundParams& bp);
double single_ris_max_power(const BoundParams& bp);

/// Density of P = B exp(-beta d_xy) / (d_xy^2 + d_h^2) with d_xy ~ 2r/R^2 and
/// d_h ~ U[h_min, h_max], tabulated on `grid_size` points spanning [0, B / h_min^2].
DiscretePdf single_ris_power_pdf(const BoundParams& bp, std::size_t grid_size = 4096);

/// Density of the sum of n_r independent copies on the same grid spacing.
DiscretePdf convolve_n(const DiscretePdf& pdf, std::size_t n_r);

/// Trapezoidal mass above epsilon, clamped to [0, 1].
double coverage_probability(const DiscretePdf& pdf, double epsilon);

/// Convenience: coverage_probability(convolve_n(single_ris_power_pdf(bp), n_r), epsilon).
double bound_coverage(const BoundParams& bp, double epsilon, std::size_t grid_size = 4096);

/// Direct sampling of the same random sum; validation oracle for the pipeline above.
double monte_carlo_bound(const BoundParams& bp, double epsilon, std::size_t samples, Rng& rng);

}  // namespace riscov
