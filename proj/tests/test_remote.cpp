#include "qtomo/remote.hpp"

#include "qtomo/errors.hpp"
#include "qtomo/mock_solver.hpp"
#include "qtomo/solver.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <stdexcept>

#include <random>

using namespace qtomo;
using namespace qtomo::testing;

namespace {

QuboProblem random_problem(std::mt19937_64& rng, int n) {
    QuboProblem p;
    p.n_vars = n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (i == j || rng() % 2)
                p.entries.push_back({i, j, static_cast<double>(rng() % 2001) / 100.0 - 10.0});
    return p;
}

EndpointConfig fast_config(const std::string& url) {
    EndpointConfig cfg;
    cfg.url = url;
    cfg.time_limit_s = 5.0;
    cfg.max_attempts = 3;
    cfg.backoff_initial_ms = 10;
    return cfg;
}

} // namespace

TEST_CASE("remote solving matches the exhaustive oracle through the mock service") {
    MockSolverServer server;
    REQUIRE(server.start());
    const EndpointConfig cfg = fast_config(server.url());

    std::mt19937_64 rng(113);
    for (int run = 0; run < 5; ++run) {
        const QuboProblem p = random_problem(rng, 10);
        const SolveResult remote = solve_remote(p, cfg);
        const SolveResult exact = solve_exhaustive(p);
        CHECK(remote.energy == doctest::Approx(exact.energy).epsilon(1e-9));
        CHECK(remote.bits == exact.bits);
        CHECK(remote.solver_id == "remote:" + server.url());
    }
}

TEST_CASE("short bit vectors raise protocol errors") {
    MockSolverServer server(MockFault::short_bits);
    REQUIRE(server.start());
    std::mt19937_64 rng(127);
    const QuboProblem p = random_problem(rng, 8);
    CHECK_THROWS_AS(solve_remote(p, fast_config(server.url())), ProtocolError);
}

TEST_CASE("corrupted energies raise integrity errors") {
    MockSolverServer server(MockFault::bad_energy);
    REQUIRE(server.start());
    std::mt19937_64 rng(131);
    const QuboProblem p = random_problem(rng, 8);
    CHECK_THROWS_AS(solve_remote(p, fast_config(server.url())), IntegrityError);
}

TEST_CASE("unreachable endpoints raise transport errors after retries") {
    std::mt19937_64 rng(137);
    const QuboProblem p = random_problem(rng, 6);
    EndpointConfig cfg = fast_config("http://127.0.0.1:1"); // nothing listens there
    CHECK_THROWS_AS(solve_remote(p, cfg), TransportError);

    EndpointConfig empty;
    CHECK_THROWS_AS(solve_remote(p, empty), TransportError);
}

TEST_CASE("bearer tokens are forwarded") {
    MockSolverServer server(MockFault::none, "sekrit");
    REQUIRE(server.start());
    std::mt19937_64 rng(139);
    const QuboProblem p = random_problem(rng, 6);

    EndpointConfig no_token = fast_config(server.url());
    CHECK_THROWS_AS(solve_remote(p, no_token), ProtocolError); // 401

    EndpointConfig with_token = fast_config(server.url());
    with_token.token = "sekrit";
    const SolveResult r = solve_remote(p, with_token);
    CHECK(r.energy == doctest::Approx(solve_exhaustive(p).energy).epsilon(1e-9));
}
