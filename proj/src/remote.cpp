#include "qtomo/remote.hpp"

#include "qtomo/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace qtomo {

EndpointConfig EndpointConfig::from_env() {
    EndpointConfig cfg;
    if (const char* url = std::getenv("QTOMO_SOLVER_URL"))
        cfg.url = url;
    if (const char* token = std::getenv("QTOMO_SOLVER_TOKEN"))
        cfg.token = token;
    return cfg;
}

SolveResult solve_remote(const QuboProblem& problem, const EndpointConfig& config) {
    if (config.url.empty())
        throw TransportError("solve_remote: no endpoint configured (set QTOMO_SOLVER_URL)");

    nlohmann::json request;
    request["n_vars"] = problem.n_vars;
    auto& entries = request["entries"] = nlohmann::json::array();
    for (const QuboEntry& q : problem.entries)
        entries.push_back({q.i, q.j, q.coeff});
    request["time_limit_s"] = config.time_limit_s;
    const std::string body = request.dump();

    httplib::Client client(config.url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(static_cast<time_t>(config.time_limit_s) + 30, 0);
    httplib::Headers headers;
    if (!config.token.empty())
        headers.emplace("Authorization", "Bearer " + config.token);

    httplib::Result res;
    int backoff_ms = config.backoff_initial_ms;
    for (int attempt = 1;; ++attempt) {
        res = client.Post("/solve", headers, body, "application/json");
        if (res)
            break;
        if (attempt >= config.max_attempts)
            throw TransportError("solve_remote: " + config.url + " unreachable after " +
                                 std::to_string(config.max_attempts) + " attempts (" +
                                 httplib::to_string(res.error()) + ")");
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        backoff_ms *= 2;
    }

    if (res->status != 200)
        throw ProtocolError("solve_remote: service returned HTTP " +
                            std::to_string(res->status));

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("solve_remote: response is not valid JSON: ") + e.what());
    }
    if (!reply.contains("bits") || !reply["bits"].is_array() || !reply.contains("energy") ||
        !reply["energy"].is_number())
        throw ProtocolError("solve_remote: response missing bits/energy fields");

    SolveResult result;
    result.solver_id = "remote:" + config.url;
    result.seed = 0;
    result.bits.reserve(reply["bits"].size());
    for (const auto& b : reply["bits"]) {
        if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1))
            throw ProtocolError("solve_remote: bits must be 0/1 integers");
        result.bits.push_back(static_cast<uint8_t>(b.get<int>()));
    }
    if (result.bits.size() != static_cast<size_t>(problem.n_vars))
        throw ProtocolError("solve_remote: service returned " +
                            std::to_string(result.bits.size()) + " bits for " +
                            std::to_string(problem.n_vars) + " variables");

    const double reported = reply["energy"].get<double>();
    const double local = evaluate_energy(problem, result.bits);
    if (std::abs(local - reported) > 1e-6 * std::max(1.0, std::abs(local)))
        throw IntegrityError("solve_remote: reported energy " + std::to_string(reported) +
                             " does not match local re-evaluation " + std::to_string(local));
    result.energy = local;
    result.runtime_s = reply.value("runtime_s", 0.0);
    return result;
}

} // namespace qtomo
