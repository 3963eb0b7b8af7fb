#pragma once

#include "qtomo/qubo.hpp"

#include <string>

namespace qtomo {

/// Remote hybrid-solver endpoint. Wire protocol: POST <url>/solve with
/// {"n_vars": int, "entries": [[i, j, coeff], ...], "time_limit_s": t};
/// the service answers {"bits": [0|1, ...], "energy": e, "runtime_s": r}.
/// Auth is a bearer token when `token` is non-empty.
struct EndpointConfig {
    std::string url;   // e.g. "http://localhost:8321"
    std::string token;
    double time_limit_s = 10.0;
    int max_attempts = 3;
    int backoff_initial_ms = 250; // doubles per retry

    /// QTOMO_SOLVER_URL and QTOMO_SOLVER_TOKEN.
    static EndpointConfig from_env();
};

/// Submit the problem and re-verify the reported energy locally.
/// Throws TransportError after max_attempts connection failures,
/// ProtocolError on malformed responses, IntegrityError when the
/// reported energy disagrees with evaluate_energy beyond 1e-6 relative.
SolveResult solve_remote(const QuboProblem& problem, const EndpointConfig& config);

} // namespace qtomo
