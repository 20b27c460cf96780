#include "riscov/opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace riscov {

namespace {

// Compressed view of a PowerMatrixSet for repeated objective evaluation. Pairs whose
// total attainable power cannot exceed epsilon are dropped; they never count as covered.
class Evaluator {
public:
    Evaluator(const PowerMatrixSet& w, double epsilon) : epsilon_(epsilon), total_(w.total_nlos()) {
        offsets_.push_back(0);
        for (const auto& block : w.blocks()) {
            for (const auto& row : block.rows) {
                double reachable = 0.0;
                for (const auto& e : row) {
                    reachable += e.power;
                }
                if (!(reachable > epsilon)) {
                    continue;
                }
                for (const auto& e : row) {
                    sites_.push_back(e.site);
                    powers_.push_back(e.power);
                }
                offsets_.push_back(sites_.size());
            }
        }
    }

    std::size_t total() const { return total_; }

    std::size_t covered(const std::vector<std::uint8_t>& bits) const {
        std::size_t count = 0;
        for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
            double sum = 0.0;
            for (std::size_t t = offsets_[r]; t < offsets_[r + 1]; ++t) {
                if (bits[sites_[t]]) {
                    sum += powers_[t];
                    if (sum > epsilon_) {
                        ++count;
                        break;
                    }
                }
            }
        }
        return count;
    }

private:
    double epsilon_;
    std::size_t total_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> sites_;
    std::vector<double> powers_;
};

void check_dims(const DeploymentMask& x, const PowerMatrixSet& w) {
    if (x.n_buildings() != w.n_buildings()) {
        throw std::invalid_argument("mask has " + std::to_string(x.n_buildings()) +
                                    " rows but the power matrices have " + std::to_string(w.n_buildings()));
    }
}

struct Individual {
    DeploymentMask mask;
    std::size_t covered = 0;
};

bool fitter(const Individual& a, const Individual& b) {
    return a.covered > b.covered;
}

// One island of the parallel GA: its own population, random stream and fitness cache.
class Island {
public:
    Island(const Evaluator& eval, const PgaParams& params, double gamma, std::size_t n_b, double mutation_rate,
           std::uint64_t seed)
        : eval_(eval), params_(params), gamma_(gamma), n_b_(n_b), mutation_rate_(mutation_rate), rng_(seed) {}

    void initialise(const std::vector<DeploymentMask>& seeds) {
        pop_.clear();
        for (std::size_t i = 0; i < params_.s_p; ++i) {
            DeploymentMask m = i < seeds.size() ? repair(seeds[i], gamma_, n_b_, rng_)
                                                : random_deployment(n_b_, gamma_, rng_);
            pop_.push_back(make(std::move(m)));
        }
        sort();
        best_ = pop_.front();
    }

    void generation() {
        sort();
        std::vector<Individual> next;
        next.reserve(params_.s_p);
        next.push_back(pop_.front());
        while (next.size() < params_.s_p) {
            const Individual& a = tournament();
            const Individual& b = tournament();
            DeploymentMask child = uniform01(rng_) < params_.crossover_rate ? crossover(a.mask, b.mask) : a.mask;
            mutate(child);
            next.push_back(make(repair(std::move(child), gamma_, n_b_, rng_)));
        }
        pop_ = std::move(next);
        sort();
        if (pop_.front().covered > best_.covered) {
            best_ = pop_.front();
        }
    }

    void run(std::size_t generations) {
        per_gen_best_.clear();
        for (std::size_t g = 0; g < generations; ++g) {
            generation();
            per_gen_best_.push_back(best_.covered);
        }
    }

    std::vector<Individual> top(std::size_t n) {
        sort();
        return {pop_.begin(), pop_.begin() + static_cast<std::ptrdiff_t>(std::min(n, pop_.size()))};
    }

    // Offspring of an immigrant elite and a local tournament winner.
    Individual cross_immigrant(const DeploymentMask& elite) {
        const Individual& local = tournament();
        DeploymentMask child = crossover(elite, local.mask);
        mutate(child);
        return make(repair(std::move(child), gamma_, n_b_, rng_));
    }

    Individual mutate_immigrant(const DeploymentMask& elite) {
        DeploymentMask child = elite;
        mutate(child);
        if (child == elite && !child.bits().empty()) {
            auto& bits = child.bits();
            const std::size_t pos = uniform_index(rng_, bits.size());
            bits[pos] ^= 1;
        }
        return make(repair(std::move(child), gamma_, n_b_, rng_));
    }

    void replace_worst(std::vector<Individual> incoming) {
        sort();
        const std::size_t n = std::min(incoming.size(), pop_.size());
        for (std::size_t i = 0; i < n; ++i) {
            pop_[pop_.size() - 1 - i] = std::move(incoming[i]);
        }
        sort();
        if (pop_.front().covered > best_.covered) {
            best_ = pop_.front();
        }
    }

    const Individual& best() const { return best_; }
    const std::vector<std::size_t>& per_generation_best() const { return per_gen_best_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    Individual make(DeploymentMask m) {
        if (params_.cache) {
            std::string key(m.bits().begin(), m.bits().end());
            if (auto it = cache_.find(key); it != cache_.end()) {
                return {std::move(m), it->second};
            }
            const std::size_t c = eval_.covered(m.bits());
            ++evaluations_;
            cache_.emplace(std::move(key), c);
            return {std::move(m), c};
        }
        ++evaluations_;
        const std::size_t c = eval_.covered(m.bits());
        return {std::move(m), c};
    }

    void sort() { std::stable_sort(pop_.begin(), pop_.end(), fitter); }

    const Individual& tournament() {
        const Individual* winner = &pop_[uniform_index(rng_, pop_.size())];
        for (std::size_t t = 1; t < params_.tournament; ++t) {
            const Individual* rival = &pop_[uniform_index(rng_, pop_.size())];
            if (rival->covered > winner->covered) {
                winner = rival;
            }
        }
        return *winner;
    }

    // Uniform crossover with one gene per building (its four facet bits).
    DeploymentMask crossover(const DeploymentMask& a, const DeploymentMask& b) {
        DeploymentMask child = a;
        for (std::size_t i = 0; i < n_b_; ++i) {
            if (uniform01(rng_) < 0.5) {
                for (int j = 1; j <= kFacetsPerBuilding; ++j) {
                    child.set(i, j, b.get(i, j));
                }
            }
        }
        return child;
    }

    void mutate(DeploymentMask& m) {
        for (auto& bit : m.bits()) {
            if (uniform01(rng_) < mutation_rate_) {
                bit ^= 1;
            }
        }
    }

    const Evaluator& eval_;
    const PgaParams& params_;
    double gamma_;
    std::size_t n_b_;
    double mutation_rate_;
    Rng rng_;
    std::vector<Individual> pop_;
    Individual best_;
    std::vector<std::size_t> per_gen_best_;
    std::unordered_map<std::string, std::size_t> cache_;
    std::size_t evaluations_ = 0;
};

}  // namespace

std::size_t DeploymentMask::row_sum(std::size_t i) const {
    std::size_t s = 0;
    for (int j = 1; j <= kFacetsPerBuilding; ++j) {
        s += get(i, j) ? 1 : 0;
    }
    return s;
}

std::size_t DeploymentMask::total() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

int DeploymentMask::facet_of(std::size_t i) const {
    for (int j = 1; j <= kFacetsPerBuilding; ++j) {
        if (get(i, j)) {
            return j;
        }
    }
    return 0;
}

std::size_t ris_budget(std::size_t n_b, double gamma) {
    if (gamma <= 0.0) {
        return 0;
    }
    const double raw = static_cast<double>(n_b) * gamma;
    return static_cast<std::size_t>(std::floor(raw + 1e-9));
}

std::size_t covered_count(const DeploymentMask& x, const PowerMatrixSet& w, double epsilon) {
    check_dims(x, w);
    return Evaluator(w, epsilon).covered(x.bits());
}

double objective(const DeploymentMask& x, const PowerMatrixSet& w, double epsilon) {
    check_dims(x, w);
    const std::size_t total = w.total_nlos();
    if (total == 0) {
        return 0.0;
    }
    return static_cast<double>(covered_count(x, w, epsilon)) / static_cast<double>(total);
}

bool is_feasible(const DeploymentMask& x, double gamma, std::size_t n_b) {
    for (std::size_t i = 0; i < x.n_buildings(); ++i) {
        if (x.row_sum(i) > 1) {
            return false;
        }
    }
    return x.total() <= ris_budget(n_b, gamma);
}

DeploymentMask repair(DeploymentMask x, double gamma, std::size_t n_b, Rng& rng) {
    if (is_feasible(x, gamma, n_b)) {
        return x;
    }
    for (std::size_t i = 0; i < x.n_buildings(); ++i) {
        const std::size_t s = x.row_sum(i);
        if (s <= 1) {
            continue;
        }
        std::vector<int> on;
        for (int j = 1; j <= kFacetsPerBuilding; ++j) {
            if (x.get(i, j)) {
                on.push_back(j);
            }
        }
        const int keep = on[uniform_index(rng, s)];
        for (int j : on) {
            x.set(i, j, j == keep);
        }
    }
    const std::size_t budget = ris_budget(n_b, gamma);
    std::vector<std::size_t> set_bits;
    for (std::size_t p = 0; p < x.bits().size(); ++p) {
        if (x.bits()[p]) {
            set_bits.push_back(p);
        }
    }
    while (set_bits.size() > budget) {
        const std::size_t pick = uniform_index(rng, set_bits.size());
        x.bits()[set_bits[pick]] = 0;
        set_bits.erase(set_bits.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return x;
}

DeploymentMask random_deployment(std::size_t n_b, double gamma, Rng& rng) {
    DeploymentMask x(n_b);
    const std::size_t budget = std::min(ris_budget(n_b, gamma), n_b);
    std::vector<std::size_t> order(n_b);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `budget` slots are a uniform subset.
    for (std::size_t i = 0; i < budget; ++i) {
        const std::size_t j = i + uniform_index(rng, n_b - i);
        std::swap(order[i], order[j]);
        const int facet_id = 1 + static_cast<int>(uniform_index(rng, kFacetsPerBuilding));
        x.set(order[i], facet_id, true);
    }
    return x;
}

void PgaParams::validate() const {
    const bool ok = n_p >= 2 && s_p >= 2 && e1 < s_p && e2 <= s_p && tournament >= 1 && crossover_rate >= 0.0 &&
                    crossover_rate <= 1.0 && mutation_rate <= 1.0;
    if (!ok) {
        throw std::invalid_argument("PgaParams: invalid parameter set");
    }
}

FitnessReport pga_optimize(const PowerMatrixSet& w, double epsilon, double gamma, const PgaParams& params,
                           const std::vector<DeploymentMask>& initial) {
    params.validate();
    if (w.total_nlos() == 0) {
        throw std::invalid_argument("pga_optimize: no NLoS users in the power matrices");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n_b = w.n_buildings();
    const double mutation_rate =
        params.mutation_rate >= 0.0 ? params.mutation_rate : 1.0 / static_cast<double>(kFacetsPerBuilding * std::max<std::size_t>(n_b, 1));
    const Evaluator eval(w, epsilon);

    std::vector<Island> islands;
    islands.reserve(params.n_p);
    for (std::size_t p = 0; p < params.n_p; ++p) {
        islands.emplace_back(eval, params, gamma, n_b, mutation_rate,
                             derive_seed(params.seed, "pga-pop-" + std::to_string(p)));
    }
    parallel_for(params.n_p, [&](std::size_t p) {
        islands[p].initialise(p == 0 ? initial : std::vector<DeploymentMask>{});
    });

    Individual best;
    best.mask = DeploymentMask(n_b);
    best.covered = 0;
    auto absorb_bests = [&] {
        bool improved = false;
        for (const auto& isl : islands) {
            if (isl.best().covered > best.covered) {
                best = isl.best();
                improved = true;
            }
        }
        return improved;
    };
    absorb_bests();
    // Ties at zero coverage still report a mask that the search actually produced.
    if (best.covered == 0) {
        best = islands.front().best();
    }

    FitnessReport report;
    const double denom = static_cast<double>(eval.total());
    const std::size_t gen_budget = std::min(params.n_g, params.interval * params.n_m);
    std::size_t done = 0;
    std::size_t stalled = 0;
    for (std::size_t m = 0; m < params.n_m && done < gen_budget; ++m) {
        const std::size_t gens = std::min(params.interval, gen_budget - done);
        parallel_for(params.n_p, [&](std::size_t p) { islands[p].run(gens); });
        for (std::size_t g = 0; g < gens; ++g) {
            std::size_t c = best.covered;
            for (const auto& isl : islands) {
                c = std::max(c, isl.per_generation_best()[g]);
            }
            report.history.push_back(static_cast<double>(c) / denom);
        }
        done += gens;

        // Crossover migration: top e1 of p breed inside p + 1, replacing its worst e1.
        std::vector<std::vector<Individual>> elites(params.n_p);
        for (std::size_t p = 0; p < params.n_p; ++p) {
            elites[p] = islands[p].top(params.e1);
        }
        for (std::size_t p = 0; p < params.n_p; ++p) {
            Island& next = islands[(p + 1) % params.n_p];
            std::vector<Individual> offspring;
            for (const auto& e : elites[p]) {
                offspring.push_back(next.cross_immigrant(e.mask));
            }
            next.replace_worst(std::move(offspring));
        }

        // Mutation migration: mutated copies of the best e2 of p replace the worst of p + 1.
        for (std::size_t p = 0; p < params.n_p; ++p) {
            elites[p] = islands[p].top(params.e2);
        }
        for (std::size_t p = 0; p < params.n_p; ++p) {
            Island& next = islands[(p + 1) % params.n_p];
            std::vector<Individual> mutants;
            for (const auto& e : elites[p]) {
                mutants.push_back(next.mutate_immigrant(e.mask));
            }
            next.replace_worst(std::move(mutants));
        }

        if (absorb_bests()) {
            stalled = 0;
        } else if (params.stall_rounds > 0 && ++stalled >= params.stall_rounds) {
            break;
        }
        if (!report.history.empty()) {
            report.history.back() = std::max(report.history.back(), static_cast<double>(best.covered) / denom);
        }
    }

    for (const auto& isl : islands) {
        report.evaluations += isl.evaluations();
    }
    report.best_mask = best.mask;
    report.best_fitness = static_cast<double>(best.covered) / denom;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::uint64_t enumeration_size(std::size_t n_b, double gamma) {
    const std::size_t budget = std::min(ris_budget(n_b, gamma), n_b);
    // 64-bit mantissa keeps every term exact below the saturation point.
    constexpr long double cap = 18446744073709551615.0L;
    long double total = 0.0L;
    long double term = 1.0L;  // C(n_b, k) * 4^k
    for (std::size_t k = 0; k <= budget; ++k) {
        total += term;
        if (total >= cap) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        term = term * static_cast<long double>(n_b - k) / static_cast<long double>(k + 1) * 4.0L;
    }
    return static_cast<std::uint64_t>(total);
}

FitnessReport exhaustive_search(const PowerMatrixSet& w, double epsilon, double gamma, std::uint64_t guard) {
    const std::size_t n_b = w.n_buildings();
    const std::uint64_t size = enumeration_size(n_b, gamma);
    if (size > guard) {
        throw std::length_error("exhaustive_search: " + std::to_string(size) + " masks exceed the guard of " +
                                std::to_string(guard));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t budget = std::min(ris_budget(n_b, gamma), n_b);
    const Evaluator eval(w, epsilon);

    DeploymentMask current(n_b);
    DeploymentMask best_mask(n_b);
    std::size_t best_cov = 0;
    bool have_best = false;
    std::uint64_t visited = 0;

    // Per row the choices none, facet 4, 3, 2, 1 are in increasing lexicographic order
    // of the row bits, so masks are visited in lexicographic order and the first
    // strict improvement wins every tie.
    auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n_b) {
            ++visited;
            const std::size_t c = eval.covered(current.bits());
            if (!have_best || c > best_cov) {
                best_cov = c;
                best_mask = current;
                have_best = true;
            }
            return;
        }
        self(self, i + 1, used);
        if (used == budget) {
            return;
        }
        for (int j = kFacetsPerBuilding; j >= 1; --j) {
            current.set(i, j, true);
            self(self, i + 1, used + 1);
            current.set(i, j, false);
        }
    };
    recurse(recurse, 0, 0);

    FitnessReport report;
    const std::size_t total = eval.total();
    report.best_mask = best_mask;
    report.best_fitness = total == 0 ? 0.0 : static_cast<double>(best_cov) / static_cast<double>(total);
    report.history = {report.best_fitness};
    report.evaluations = visited;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace riscov
