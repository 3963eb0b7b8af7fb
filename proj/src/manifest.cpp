#include "qtomo/manifest.hpp"

#include "qtomo/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qtomo {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw FormatError("manifest: " + msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            bad("unknown key '" + key + "' in " + where);
}

Aggregate parse_aggregate(const std::string& s) {
    if (s == "mean") return Aggregate::mean;
    if (s == "max") return Aggregate::max;
    if (s == "min") return Aggregate::min;
    bad("unknown aggregate '" + s + "'");
}

AngleMode parse_angle_mode(const std::string& s) {
    if (s == "pick_second") return AngleMode::pick_second;
    if (s == "mean_projection") return AngleMode::mean_projection;
    bad("unknown angle_mode '" + s + "'");
}

Interp parse_interp(const std::string& s) {
    if (s == "nearest") return Interp::nearest;
    if (s == "bilinear") return Interp::bilinear;
    if (s == "bicubic") return Interp::bicubic;
    bad("unknown interpolation '" + s + "'");
}

EncodingSpec parse_encoding(const json& j) {
    check_keys(j, {"mode", "m", "alphas"}, "encoding");
    const std::string mode = j.value("mode", "radix2");
    if (mode == "radix2")
        return EncodingSpec::radix2(j.value("m", 1));
    if (mode == "unit_step")
        return EncodingSpec::unit_step(j.value("m", 1));
    std::vector<double> alphas;
    if (!j.contains("alphas") || !j["alphas"].is_array())
        bad("MAC encodings need an 'alphas' array");
    for (const auto& a : j["alphas"])
        alphas.push_back(a.get<double>());
    if (mode == "mac_direct")
        return EncodingSpec::mac_direct(std::move(alphas));
    if (mode == "mac_cumulative")
        return EncodingSpec::mac_cumulative(std::move(alphas));
    bad("unknown encoding mode '" + mode + "'");
}

DownscaleSpec parse_downscale(const json& j) {
    check_keys(j, {"d1", "d2", "aggregate", "angle_mode"}, "downscale");
    DownscaleSpec spec;
    spec.d1 = j.value("d1", 1);
    spec.d2 = j.value("d2", 1);
    spec.aggregate = parse_aggregate(j.value("aggregate", "mean"));
    spec.angle_mode = parse_angle_mode(j.value("angle_mode", "pick_second"));
    spec.validate();
    return spec;
}

StageSpec parse_stage(const json& j) {
    check_keys(j,
               {"image_size", "downscale", "interp", "gaussian_sigma", "max_refine_iterations",
                "convergence_tol"},
               "stage");
    StageSpec stage;
    if (!j.contains("image_size"))
        bad("stage needs image_size");
    stage.image_size = j["image_size"].get<int>();
    if (j.contains("downscale"))
        stage.downscale = parse_downscale(j["downscale"]);
    stage.interp = parse_interp(j.value("interp", "nearest"));
    if (j.contains("gaussian_sigma"))
        stage.gaussian_sigma = j["gaussian_sigma"].get<double>();
    stage.max_refine_iterations = j.value("max_refine_iterations", 5);
    stage.convergence_tol = j.value("convergence_tol", 1e-3);
    return stage;
}

} // namespace

Manifest parse_manifest(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }

    check_keys(j,
               {"sample", "strategy", "input", "encoding", "downscale", "sparse", "stages",
                "upscale", "region_size", "region_overlap", "region_schedule", "max_iterations",
                "convergence_tol", "post", "solver", "seed", "variable_budget", "reference",
                "output_dir"},
               "manifest");

    Manifest m;
    m.config.sample = j.value("sample", "sample");
    m.strategy = j.value("strategy", "single_stage");
    if (m.strategy != "single_stage" && m.strategy != "multi_stage" &&
        m.strategy != "sparse_view")
        bad("unknown strategy '" + m.strategy + "'");

    if (j.contains("input")) {
        const json& in = j["input"];
        check_keys(in, {"phantom", "image", "sinogram", "angles"}, "input");
        if (in.contains("phantom")) {
            const json& ph = in["phantom"];
            check_keys(ph, {"size", "mode", "levels"}, "input.phantom");
            m.phantom_size = ph.value("size", 0);
            const std::string mode = ph.value("mode", "binary");
            if (mode == "binary")
                m.phantom_mode = PhantomMode::binary();
            else if (mode == "integer")
                m.phantom_mode = PhantomMode::integer_levels(ph.value("levels", 4));
            else
                bad("unknown phantom mode '" + mode + "'");
        }
        m.image_path = in.value("image", "");
        m.sinogram_path = in.value("sinogram", "");
        m.projection_angles = in.value("angles", 0);
    }

    if (j.contains("encoding"))
        m.config.encoding = parse_encoding(j["encoding"]);
    if (j.contains("downscale"))
        m.config.downscale = parse_downscale(j["downscale"]);
    if (j.contains("sparse")) {
        const json& sp = j["sparse"];
        check_keys(sp, {"d", "aggregate"}, "sparse");
        m.config.sparse_detector_group = sp.value("d", 2);
        m.config.sparse_aggregate = parse_aggregate(sp.value("aggregate", "mean"));
    }
    if (j.contains("stages")) {
        if (!j["stages"].is_array())
            bad("stages must be an array");
        for (const auto& s : j["stages"])
            m.plan.stages.push_back(parse_stage(s));
    }
    m.config.upscale = parse_interp(j.value("upscale", "nearest"));
    m.config.region_size = j.value("region_size", 0);
    m.config.region_overlap = j.value("region_overlap", 0);
    if (j.contains("region_schedule")) {
        std::vector<int> sched;
        for (const auto& id : j["region_schedule"])
            sched.push_back(id.get<int>());
        m.config.region_schedule = std::move(sched);
    }
    m.config.max_iterations = j.value("max_iterations", 5);
    m.config.convergence_tol = j.value("convergence_tol", 1e-3);

    if (j.contains("post")) {
        const json& post = j["post"];
        check_keys(post, {"type", "sigma"}, "post");
        const std::string type = post.value("type", "none");
        if (type == "none")
            m.config.post = PostProcess::none;
        else if (type == "gaussian")
            m.config.post = PostProcess::gaussian;
        else if (type == "hole_fill")
            m.config.post = PostProcess::hole_fill;
        else
            bad("unknown post-processing '" + type + "'");
        m.config.gaussian_sigma = post.value("sigma", 1.0);
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        check_keys(s,
                   {"backend", "restarts", "sweeps", "sweeps_per_var", "beta_min", "beta_max",
                    "time_limit_s", "url", "token"},
                   "solver");
        if (s.contains("backend")) {
            m.has_backend = true;
            const std::string backend = s["backend"].get<std::string>();
            if (backend == "exhaustive")
                m.config.solver.backend = SolverBackend::exhaustive;
            else if (backend == "sa")
                m.config.solver.backend = SolverBackend::sa;
            else if (backend == "remote")
                m.config.solver.backend = SolverBackend::remote;
            else
                bad("unknown solver backend '" + backend + "'");
        }
        m.config.solver.sa.restarts = s.value("restarts", 8);
        m.config.solver.sa.sweeps = s.value("sweeps", static_cast<int64_t>(0));
        m.config.solver.sweeps_per_var = s.value("sweeps_per_var", static_cast<int64_t>(200));
        m.config.solver.sa.beta_min = s.value("beta_min", 0.1);
        m.config.solver.sa.beta_max = s.value("beta_max", 10.0);
        if (s.contains("time_limit_s")) {
            m.has_time_limit = true;
            m.config.solver.remote.time_limit_s = s["time_limit_s"].get<double>();
        }
        m.config.solver.remote.url = s.value("url", "");
        m.config.solver.remote.token = s.value("token", "");
        m.config.solver.sa.validate();
    }

    if (j.contains("seed")) {
        m.has_seed = true;
        m.config.seed = j["seed"].get<uint64_t>();
    }
    m.config.variable_budget = j.value("variable_budget", 8192);

    if (j.contains("reference")) {
        const json& ref = j["reference"];
        if (ref.is_string() && ref.get<std::string>() == "phantom") {
            m.reference_is_phantom = true;
        } else if (ref.is_object() && ref.contains("image")) {
            m.reference_image_path = ref["image"].get<std::string>();
        } else {
            bad("reference must be \"phantom\" or {\"image\": path}");
        }
    }
    if (j.contains("output_dir")) {
        m.has_output_dir = true;
        m.output_dir = j["output_dir"].get<std::string>();
    }

    if (m.strategy == "multi_stage" && m.plan.stages.empty())
        bad("multi_stage strategy needs a 'stages' array");
    if (m.sinogram_path.empty() && m.image_path.empty() && !m.phantom_mode)
        bad("input needs one of sinogram, image or phantom");
    if (m.sinogram_path.empty() && m.projection_angles < 1)
        bad("projecting an image input needs input.angles >= 1");
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw FormatError("manifest: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_manifest(buf.str());
}

std::string manifest_echo_json(const Manifest& m) {
    json j;
    j["sample"] = m.config.sample;
    j["strategy"] = m.strategy;
    j["encoding"]["mode"] = m.config.encoding.mode_name();
    j["encoding"]["m"] = m.config.encoding.m;
    if (!m.config.encoding.alphas.empty())
        j["encoding"]["alphas"] = m.config.encoding.alphas;
    j["seed"] = m.config.seed;
    j["max_iterations"] = m.config.max_iterations;
    j["convergence_tol"] = m.config.convergence_tol;
    j["region_size"] = m.config.region_size;
    j["region_overlap"] = m.config.region_overlap;
    j["variable_budget"] = m.config.variable_budget;
    switch (m.config.solver.backend) {
    case SolverBackend::exhaustive: j["solver"]["backend"] = "exhaustive"; break;
    case SolverBackend::sa: j["solver"]["backend"] = "sa"; break;
    case SolverBackend::remote: j["solver"]["backend"] = "remote"; break;
    }
    j["solver"]["restarts"] = m.config.solver.sa.restarts;
    j["solver"]["sweeps_per_var"] = m.config.solver.sweeps_per_var;
    j["solver"]["beta_min"] = m.config.solver.sa.beta_min;
    j["solver"]["beta_max"] = m.config.solver.sa.beta_max;
    switch (m.config.post) {
    case PostProcess::none: j["post"]["type"] = "none"; break;
    case PostProcess::gaussian:
        j["post"]["type"] = "gaussian";
        j["post"]["sigma"] = m.config.gaussian_sigma;
        break;
    case PostProcess::hole_fill: j["post"]["type"] = "hole_fill"; break;
    }
    j["output_dir"] = m.output_dir;
    return j.dump(2) + "\n";
}

} // namespace qtomo
