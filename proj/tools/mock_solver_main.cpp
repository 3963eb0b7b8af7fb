// Standalone loopback solver speaking the /solve wire protocol, for
// exercising the remote backend without any external service.

#include "qtomo/mock_solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

namespace {
volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }
} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mock QUBO solver service"};
    int port = 8321;
    std::string fault = "none";
    std::string token;
    app.add_option("--port", port, "listen port");
    app.add_option("--fault", fault, "none | short_bits | bad_energy")
        ->check(CLI::IsMember({"none", "short_bits", "bad_energy"}));
    app.add_option("--token", token, "require this bearer token");
    CLI11_PARSE(app, argc, argv);

    qtomo::MockFault f = qtomo::MockFault::none;
    if (fault == "short_bits")
        f = qtomo::MockFault::short_bits;
    else if (fault == "bad_energy")
        f = qtomo::MockFault::bad_energy;

    qtomo::MockSolverServer server(f, token);
    if (!server.start(port)) {
        std::cerr << "failed to bind port " << port << '\n';
        return 1;
    }
    std::cout << "mock solver listening on " << server.url() << "/solve" << std::endl;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop)
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}
