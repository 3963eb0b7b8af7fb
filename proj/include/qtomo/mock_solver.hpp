#pragma once

#include <memory>
#include <string>

namespace qtomo {

/// Faults the mock service can inject, for exercising client error paths.
enum class MockFault {
    none,       // answer with the exhaustive (or SA) solution
    short_bits, // drop the last bit of the solution
    bad_energy, // corrupt the reported energy
};

/// Loopback HTTP solver implementing the /solve wire protocol. Problems
/// up to 20 variables are solved exhaustively, larger ones with seeded
/// simulated annealing.
class MockSolverServer {
public:
    explicit MockSolverServer(MockFault fault = MockFault::none,
                              std::string require_token = "");
    ~MockSolverServer();

    MockSolverServer(const MockSolverServer&) = delete;
    MockSolverServer& operator=(const MockSolverServer&) = delete;

    /// Bind and serve on a background thread; port 0 picks a free port.
    bool start(int port = 0);
    void stop();

    int port() const;
    std::string url() const;

    void set_fault(MockFault fault);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace qtomo
