#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riscov/channel.hpp"
#include "riscov/random.hpp"

namespace riscov {

/// Binary N_B x 4 placement matrix, row-major (see site_index).
class DeploymentMask {
public:
    DeploymentMask() = default;
    explicit DeploymentMask(std::size_t n_buildings)
        : n_buildings_(n_buildings), bits_(n_buildings * kFacetsPerBuilding, 0) {}

    std::size_t n_buildings() const { return n_buildings_; }
    bool get(std::size_t i, int j) const { return bits_[site_index(i, j)] != 0; }
    void set(std::size_t i, int j, bool on) { bits_[site_index(i, j)] = on ? 1 : 0; }

    std::size_t row_sum(std::size_t i) const;
    std::size_t total() const;

    /// Facet id (1..4) of the first set bit in row i, or 0 when the row is empty.
    int facet_of(std::size_t i) const;

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    auto operator<=>(const DeploymentMask&) const = default;

private:
    std::size_t n_buildings_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// floor(n_b * gamma), guarded against representation error just below an integer.
std::size_t ris_budget(std::size_t n_b, double gamma);

/// Fraction of NLoS (k, l) pairs whose summed power through X strictly exceeds epsilon.
/// Zero when there are no NLoS pairs. Throws std::invalid_argument on a size mismatch.
double objective(const DeploymentMask& x, const PowerMatrixSet& w, double epsilon);

/// Covered (k, l) pair count; objective() times total_nlos().
std::size_t covered_count(const DeploymentMask& x, const PowerMatrixSet& w, double epsilon);

bool is_feasible(const DeploymentMask& x, double gamma, std::size_t n_b);

/// Keeps one random set bit per over-full row, then clears random bits until the
/// budget holds. Feasible input is returned unchanged.
DeploymentMask repair(DeploymentMask x, double gamma, std::size_t n_b, Rng& rng);

/// Exactly ris_budget(n_b, gamma) distinct buildings, one uniform facet each.
DeploymentMask random_deployment(std::size_t n_b, double gamma, Rng& rng);

struct PgaParams {
    std::size_t n_p = 4;          // populations
    std::size_t s_p = 50;         // individuals per population
    std::size_t n_g = 500;        // total generation budget
    std::size_t interval = 25;    // generations between migrations
    std::size_t n_m = 20;         // migration rounds
    std::size_t e1 = 3;           // crossover-migration elite size
    std::size_t e2 = 1;           // mutation-migration elite size
    std::size_t tournament = 2;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // per bit; negative selects 1 / (4 N_B)
    std::size_t stall_rounds = 0; // stop after this many migration rounds without improvement; 0 = never
    bool cache = true;            // memoise fitness per population
    std::uint64_t seed = 1;

    void validate() const;
};

struct FitnessReport {
    DeploymentMask best_mask;
    double best_fitness = 0.0;
    std::vector<double> history;  // best-so-far after each generation
    std::size_t evaluations = 0;  // objective evaluations performed
    double wall_seconds = 0.0;
};

/// Island-model genetic algorithm with ring migration. `initial` masks (repaired
/// as needed) are injected into population 0 in place of random individuals.
FitnessReport pga_optimize(const PowerMatrixSet& w, double epsilon, double gamma, const PgaParams& params,
                           const std::vector<DeploymentMask>& initial = {});

/// sum_{k=0}^{budget} C(n_b, k) 4^k, saturating at UINT64_MAX.
std::uint64_t enumeration_size(std::size_t n_b, double gamma);

/// Global optimum by enumeration; ties go to the lexicographically smallest mask.
/// Throws std::length_error when enumeration_size exceeds `guard`.
FitnessReport exhaustive_search(const PowerMatrixSet& w, double epsilon, double gamma,
                                std::uint64_t guard = 10'000'000);

}  // namespace riscov
