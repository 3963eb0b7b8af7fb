#pragma once

#include "qtomo/qubo.hpp"

#include <cstdint>
#include <span>

namespace qtomo {

/// Simulated-annealing knobs. `sweeps` counts single-flip Metropolis
/// attempts per restart; 0 selects the default of 200 * n_vars. The
/// inverse temperature follows a geometric ramp beta_min -> beta_max.
struct AnnealParams {
    uint64_t seed = 1;
    int restarts = 8;
    int64_t sweeps = 0;
    double beta_min = 0.1;
    double beta_max = 10.0;

    void validate() const;
    int64_t steps_for(int n_vars) const;
};

/// Global minimum by enumeration; ties resolve to the lexicographically
/// smallest bitstring. Guarded to n_vars <= 24.
SolveResult solve_exhaustive(const QuboProblem& problem);

/// Seeded simulated annealing with greedy polish per restart. Restart r
/// uses seed + r; restart 0 starts from `warm_start` when given, restart
/// 1 from all-zeros, the rest from random states. Pure function of
/// (problem, params, warm_start); the result never exceeds the all-zeros
/// energy or any restart's initial energy.
SolveResult solve_sa(const QuboProblem& problem, const AnnealParams& params);
SolveResult solve_sa(const QuboProblem& problem, const AnnealParams& params,
                     std::span<const uint8_t> warm_start);

/// Single-bit-flip descent to a 1-flip-local optimum; deterministic
/// ascending scan order, strict improvements only.
SolveResult polish_greedy(const QuboProblem& problem, std::span<const uint8_t> bits);

} // namespace qtomo
