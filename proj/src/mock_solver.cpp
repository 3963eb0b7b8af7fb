#include "qtomo/mock_solver.hpp"

#include "qtomo/qubo.hpp"
#include "qtomo/solver.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

namespace qtomo {

struct MockSolverServer::Impl {
    httplib::Server server;
    std::thread thread;
    std::atomic<MockFault> fault{MockFault::none};
    std::string require_token;
    int port = 0;
};

MockSolverServer::MockSolverServer(MockFault fault, std::string require_token)
    : impl_(std::make_unique<Impl>()) {
    impl_->fault = fault;
    impl_->require_token = std::move(require_token);

    impl_->server.Post("/solve", [this](const httplib::Request& req, httplib::Response& res) {
        if (!impl_->require_token.empty() &&
            req.get_header_value("Authorization") != "Bearer " + impl_->require_token) {
            res.status = 401;
            res.set_content("{\"error\":\"unauthorized\"}", "application/json");
            return;
        }

        nlohmann::json request;
        try {
            request = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
            res.status = 400;
            res.set_content("{\"error\":\"bad request\"}", "application/json");
            return;
        }

        QuboProblem problem;
        problem.n_vars = request.value("n_vars", 0);
        for (const auto& e : request["entries"])
            problem.entries.push_back({e[0].get<int32_t>(), e[1].get<int32_t>(), e[2].get<double>()});

        SolveResult solved;
        if (problem.n_vars <= 20) {
            solved = solve_exhaustive(problem);
        } else {
            AnnealParams params;
            params.seed = 1;
            solved = solve_sa(problem, params);
        }

        nlohmann::json reply;
        auto& bits = reply["bits"] = nlohmann::json::array();
        for (uint8_t b : solved.bits)
            bits.push_back(static_cast<int>(b));
        reply["energy"] = solved.energy;
        reply["runtime_s"] = solved.runtime_s;

        switch (impl_->fault.load()) {
        case MockFault::none:
            break;
        case MockFault::short_bits:
            if (!reply["bits"].empty())
                reply["bits"].erase(reply["bits"].size() - 1);
            break;
        case MockFault::bad_energy:
            reply["energy"] = solved.energy + 1.0;
            break;
        }
        res.set_content(reply.dump(), "application/json");
    });
}

MockSolverServer::~MockSolverServer() { stop(); }

bool MockSolverServer::start(int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
        if (impl_->port <= 0)
            return false;
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port))
            return false;
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return true;
}

void MockSolverServer::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int MockSolverServer::port() const { return impl_->port; }

std::string MockSolverServer::url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

void MockSolverServer::set_fault(MockFault fault) { impl_->fault = fault; }

} // namespace qtomo
