#include "qtomo/solver.hpp"

#include "qtomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qtomo {

void AnnealParams::validate() const {
    if (restarts < 1)
        throw std::invalid_argument("anneal: restarts must be >= 1");
    if (sweeps < 0)
        throw std::invalid_argument("anneal: sweeps must be >= 0");
    if (!(beta_min > 0.0) || !(beta_max > beta_min))
        throw std::invalid_argument("anneal: need 0 < beta_min < beta_max");
}

int64_t AnnealParams::steps_for(int n_vars) const {
    return sweeps > 0 ? sweeps : 200ll * std::max(n_vars, 1);
}

namespace {

constexpr double kNominalFlipRate = 2e8; // flip attempts per nominal second

// CSR adjacency over the merged upper-triangular entries, mirrored so
// each variable sees all of its couplings.
struct Couplings {
    std::vector<double> diag;
    std::vector<size_t> offsets;
    std::vector<std::pair<int32_t, double>> neighbors;

    explicit Couplings(const QuboProblem& p) {
        const int n = p.n_vars;
        diag.assign(n, 0.0);
        std::vector<size_t> degree(n, 0);
        for (const QuboEntry& q : p.entries) {
            if (q.i == q.j) {
                diag[q.i] = q.coeff;
            } else {
                ++degree[q.i];
                ++degree[q.j];
            }
        }
        offsets.assign(n + 1, 0);
        for (int v = 0; v < n; ++v)
            offsets[v + 1] = offsets[v] + degree[v];
        neighbors.resize(offsets[n]);
        std::vector<size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (const QuboEntry& q : p.entries) {
            if (q.i == q.j)
                continue;
            neighbors[cursor[q.i]++] = {q.j, q.coeff};
            neighbors[cursor[q.j]++] = {q.i, q.coeff};
        }
    }

    std::span<const std::pair<int32_t, double>> of(int v) const {
        return {neighbors.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
};

// local field: f_v = diag_v + sum_{u != v} coeff(u,v) x_u; flipping v
// changes the energy by (1 - 2 x_v) f_v
struct SpinState {
    std::vector<uint8_t> x;
    std::vector<double> field;
    double energy = 0.0;

    SpinState(const Couplings& c, std::vector<uint8_t> bits) : x(std::move(bits)) {
        const int n = static_cast<int>(x.size());
        field.assign(c.diag.begin(), c.diag.end());
        energy = 0.0;
        for (int v = 0; v < n; ++v) {
            if (!x[v])
                continue;
            energy += c.diag[v];
            for (const auto& [u, w] : c.of(v)) {
                field[u] += w;
                if (u < v && x[u])
                    energy += w;
            }
        }
    }

    double flip_delta(int v) const { return x[v] ? -field[v] : field[v]; }

    void flip(const Couplings& c, int v) {
        const double sign = x[v] ? -1.0 : 1.0;
        energy += sign * field[v];
        x[v] = !x[v];
        for (const auto& [u, w] : c.of(v))
            field[u] += sign * w;
    }
};

bool lex_less(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// (energy, then lexicographic bits) candidate merge
void consider(std::vector<uint8_t>& best_bits, double& best_energy,
              const std::vector<uint8_t>& bits, double energy) {
    if (energy < best_energy ||
        (energy == best_energy && lex_less(bits, best_bits))) {
        best_energy = energy;
        best_bits = bits;
    }
}

// greedy descent on an existing state; returns flips performed
int64_t descend(const Couplings& c, SpinState& st) {
    const int n = static_cast<int>(st.x.size());
    int64_t flips = 0;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < n; ++v) {
            if (st.flip_delta(v) < 0.0) {
                st.flip(c, v);
                ++flips;
                improved = true;
            }
        }
    }
    return flips;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SolveResult solve_exhaustive(const QuboProblem& problem) {
    if (problem.n_vars > 24)
        throw CapacityError("solve_exhaustive: guarded to 24 variables, got " +
                            std::to_string(problem.n_vars));
    const int n = problem.n_vars;
    SolveResult result;
    result.solver_id = "exhaustive";
    result.seed = 0;
    if (n == 0) {
        result.energy = 0.0;
        result.runtime_s = 0.0;
        return result;
    }

    const Couplings c(problem);
    const uint64_t states = 1ull << n;
    // Gray-code walk: flip one bit per step, O(degree) updates.
    SpinState st(c, std::vector<uint8_t>(n, 0));
    std::vector<uint8_t> best_bits = st.x;
    double best_energy = st.energy;
    for (uint64_t k = 1; k < states; ++k) {
        const int v = std::countr_zero(k); // Gray-code bit to flip
        st.flip(c, v);
        if (st.energy < best_energy ||
            (st.energy == best_energy && lex_less(st.x, best_bits))) {
            best_energy = st.energy;
            best_bits = st.x;
        }
    }
    result.bits = std::move(best_bits);
    result.energy = evaluate_energy(problem, result.bits); // exact re-evaluation
    result.runtime_s = static_cast<double>(states) / kNominalFlipRate;
    return result;
}

SolveResult solve_sa(const QuboProblem& problem, const AnnealParams& params) {
    return solve_sa(problem, params, {});
}

SolveResult solve_sa(const QuboProblem& problem, const AnnealParams& params,
                     std::span<const uint8_t> warm_start) {
    params.validate();
    if (!warm_start.empty() && warm_start.size() != static_cast<size_t>(problem.n_vars))
        throw std::invalid_argument("solve_sa: warm start length mismatch");

    const int n = problem.n_vars;
    SolveResult result;
    result.solver_id = "sa";
    result.seed = params.seed;
    if (n == 0) {
        result.energy = 0.0;
        return result;
    }

    const Couplings c(problem);
    const int64_t steps = params.steps_for(n);
    const double beta_ratio = params.beta_max / params.beta_min;

    std::vector<uint8_t> best_bits(n, 1); // any valid state; replaced below
    double best_energy = std::numeric_limits<double>::infinity();
    int64_t attempts = 0;

    for (int r = 0; r < params.restarts; ++r) {
        std::mt19937_64 rng(params.seed + static_cast<uint64_t>(r));
        // restart 0: warm start (or all-zeros); one all-zeros slot; rest random
        std::vector<uint8_t> init(n, 0);
        if (r == 0 && !warm_start.empty()) {
            init.assign(warm_start.begin(), warm_start.end());
        } else if (!(r == 0 || (r == 1 && !warm_start.empty()))) {
            for (int v = 0; v < n; ++v)
                init[v] = static_cast<uint8_t>(rng() & 1);
        }

        SpinState st(c, std::move(init));
        std::vector<uint8_t> run_best = st.x;
        double run_best_energy = st.energy;

        for (int64_t t = 0; t < steps; ++t) {
            const double beta =
                steps > 1
                    ? params.beta_min * std::pow(beta_ratio, static_cast<double>(t) / (steps - 1))
                    : params.beta_max;
            const int v = static_cast<int>(rng() % static_cast<uint64_t>(n));
            const double delta = st.flip_delta(v);
            if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) {
                st.flip(c, v);
                if (st.energy < run_best_energy) {
                    run_best_energy = st.energy;
                    run_best = st.x;
                }
            }
        }
        attempts += steps;

        // polish the run's best state to its local optimum
        SpinState polish(c, std::move(run_best));
        attempts += descend(c, polish);
        const double polished = evaluate_energy(problem, polish.x);
        consider(best_bits, best_energy, polish.x, polished);
    }

    result.bits = std::move(best_bits);
    result.energy = best_energy;
    result.runtime_s = static_cast<double>(attempts) / kNominalFlipRate;
    return result;
}

SolveResult polish_greedy(const QuboProblem& problem, std::span<const uint8_t> bits) {
    if (bits.size() != static_cast<size_t>(problem.n_vars))
        throw std::invalid_argument("polish_greedy: bit count mismatch");
    const Couplings c(problem);
    SpinState st(c, std::vector<uint8_t>(bits.begin(), bits.end()));
    const int64_t flips = descend(c, st);

    SolveResult result;
    result.solver_id = "greedy";
    result.seed = 0;
    result.bits = std::move(st.x);
    result.energy = evaluate_energy(problem, result.bits);
    result.runtime_s = static_cast<double>(flips + problem.n_vars) / kNominalFlipRate;
    return result;
}

} // namespace qtomo
