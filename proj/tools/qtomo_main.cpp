// qtomo command-line front end: phantom generation, projection, sinogram
// reduction, reconstruction runs driven by a JSON manifest, and a small
// self-verification suite.

#include "qtomo/encoding.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/io.hpp"
#include "qtomo/manifest.hpp"
#include "qtomo/phantom.hpp"
#include "qtomo/pipeline.hpp"
#include "qtomo/projector.hpp"
#include "qtomo/qubo.hpp"
#include "qtomo/report.hpp"
#include "qtomo/resample.hpp"
#include "qtomo/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace qtomo;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f)
        throw FormatError("cannot open " + path + " for writing");
    f << text;
}

int fail(const std::string& kind, const std::string& message) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
    return 1;
}

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<std::string> solver;
    std::optional<std::string> out_dir;
    std::optional<double> time_limit;
};

// Flags fill manifest gaps; a flag contradicting an explicit manifest
// value is a conflict and aborts.
void apply_overrides(Manifest& m, const Overrides& o) {
    if (o.seed) {
        if (m.has_seed && m.config.seed != *o.seed)
            throw std::invalid_argument("--seed " + std::to_string(*o.seed) +
                                        " conflicts with manifest seed " +
                                        std::to_string(m.config.seed));
        m.config.seed = *o.seed;
    }
    if (o.solver) {
        SolverBackend backend;
        if (*o.solver == "exhaustive")
            backend = SolverBackend::exhaustive;
        else if (*o.solver == "sa")
            backend = SolverBackend::sa;
        else if (*o.solver == "remote")
            backend = SolverBackend::remote;
        else
            throw std::invalid_argument("unknown solver '" + *o.solver + "'");
        if (m.has_backend && m.config.solver.backend != backend)
            throw std::invalid_argument("--solver " + *o.solver +
                                        " conflicts with the manifest's solver backend");
        m.config.solver.backend = backend;
    }
    if (o.out_dir) {
        if (m.has_output_dir && m.output_dir != *o.out_dir)
            throw std::invalid_argument("--out-dir conflicts with manifest output_dir '" +
                                        m.output_dir + "'");
        m.output_dir = *o.out_dir;
    }
    if (o.time_limit) {
        if (m.has_time_limit && m.config.solver.remote.time_limit_s != *o.time_limit)
            throw std::invalid_argument("--time-limit conflicts with the manifest's time_limit_s");
        m.config.solver.remote.time_limit_s = *o.time_limit;
    }
    if (m.config.solver.backend == SolverBackend::remote &&
        m.config.solver.remote.url.empty())
        m.config.solver.remote = [&m] {
            EndpointConfig env = EndpointConfig::from_env();
            env.time_limit_s = m.config.solver.remote.time_limit_s;
            env.token = env.token.empty() ? m.config.solver.remote.token : env.token;
            return env;
        }();
}

Image resolve_reference(const Manifest& m) {
    if (m.reference_is_phantom) {
        if (!m.phantom_mode)
            throw std::invalid_argument("reference \"phantom\" needs a phantom input");
        return generate_shepp_logan(m.phantom_size, *m.phantom_mode);
    }
    return load_image(m.reference_image_path);
}

int cmd_reconstruct(const std::string& manifest_path, const Overrides& overrides) {
    Manifest m = load_manifest(manifest_path);
    apply_overrides(m, overrides);

    Sinogram sino;
    if (!m.sinogram_path.empty()) {
        sino = load_sinogram(m.sinogram_path);
    } else {
        Image input = m.phantom_mode ? generate_shepp_logan(m.phantom_size, *m.phantom_mode)
                                     : load_image(m.image_path);
        Geometry g;
        g.image_size = input.height;
        g.detectors = input.width;
        g.angles = uniform_angles(m.projection_angles);
        sino = radon(input, g);
    }

    ReconstructionResult result;
    if (m.strategy == "single_stage")
        result = single_stage_reconstruct(sino, m.config);
    else if (m.strategy == "multi_stage")
        result = multi_stage_reconstruct(sino, m.plan, m.config);
    else
        result = sparse_view_reconstruct(sino, m.config);

    fs::create_directories(m.output_dir);
    const fs::path dir(m.output_dir);
    save_image(result.image, (dir / "reconstruction.img").string());
    export_pgm(result.image, (dir / "reconstruction.pgm").string());
    write_text((dir / "ledger.csv").string(), render_gap_table(result.ledger, result.sample));
    write_text((dir / "manifest.json").string(), manifest_echo_json(m));

    nlohmann::json rep;
    rep["sample"] = result.sample;
    rep["converged"] = result.converged;
    rep["iterations"] = result.iterations_run;
    rep["wall_time_s"] = result.wall_time_s;
    rep["final_abs_gap"] = result.ledger.empty() ? 0.0 : result.ledger.back().abs_gap;
    if (m.reference_is_phantom || !m.reference_image_path.empty()) {
        const Image reference = resolve_reference(m);
        const auto levels = m.config.encoding.representable_levels();
        rep["pixel_accuracy"] = pixel_accuracy(result.image, reference, levels);
        rep["rmse"] = rmse(result.image, reference);
        export_pgm(difference_image(quantize_to_levels(result.image, levels), reference),
                   (dir / "difference.pgm").string());
    }
    int initial_size = sino.geometry.image_size;
    if (m.strategy == "single_stage")
        initial_size = sino.geometry.image_size / m.config.downscale.d2;
    else if (m.strategy == "sparse_view")
        initial_size = sino.geometry.image_size / m.config.sparse_detector_group;
    else
        initial_size = m.plan.stages.front().image_size;
    rep["dose_reduction_pct"] = dose_reduction(initial_size, result.image.height);
    write_text((dir / "report.json").string(), rep.dump(2) + "\n");

    std::cout << "sample " << result.sample << ": " << result.iterations_run
              << " refinement iteration(s), " << (result.converged ? "converged" : "not converged")
              << ", outputs in " << m.output_dir << '\n';
    return 0;
}

int cmd_verify(const std::string& level, uint64_t seed) {
    const int identity_runs = level == "full" ? 50 : 20;
    const int oracle_runs = level == "full" ? 20 : 8;
    const int locality_runs = level == "full" ? 200 : 50;

    std::mt19937_64 rng(seed);
    auto random_binary_image = [&rng](int n) {
        Image img(n, n);
        for (double& v : img.values)
            v = static_cast<double>(rng() & 1);
        return img;
    };

    bool all_ok = true;
    auto report = [&all_ok](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
        all_ok = all_ok && ok;
    };

    // ground-truth identity: the true region bits hit the analytic minimum
    {
        bool ok = true;
        for (int run = 0; run < identity_runs && ok; ++run) {
            const int n = 8;
            Image truth = random_binary_image(n);
            Geometry g{n, uniform_angles(10), n, 1.0};
            const Sinogram target = radon(truth, g);
            const Region region{static_cast<int>(rng() % 5), static_cast<int>(rng() % 5), 4, 4};
            const EncodingSpec enc = EncodingSpec::radix2(1);
            const QuboProblem problem = build_region_qubo(truth, region, target, g, enc);
            std::vector<uint8_t> bits;
            for (int r = 0; r < region.height; ++r)
                for (int c = 0; c < region.width; ++c)
                    bits.push_back(
                        static_cast<uint8_t>(truth.at(region.row0 + r, region.col0 + c)));
            const double e = evaluate_energy(problem, bits);
            ok = std::abs(e - problem.target_min) <=
                 1e-6 * std::max(1.0, std::abs(problem.target_min));
        }
        report("ground-truth energy identity (" + std::to_string(identity_runs) + " runs)", ok);
    }

    // exhaustive minimum equals the analytic target and recovers the pixels
    {
        bool ok = true;
        for (int run = 0; run < oracle_runs && ok; ++run) {
            const int n = 8;
            Image truth = random_binary_image(n);
            Geometry g{n, uniform_angles(8), n, 1.0};
            const Sinogram target = radon(truth, g);
            const Region region{static_cast<int>(rng() % 6), static_cast<int>(rng() % 6), 3, 3};
            const QuboProblem problem =
                build_region_qubo(truth, region, target, g, EncodingSpec::radix2(1));
            const SolveResult best = solve_exhaustive(problem);
            ok = std::abs(best.energy - problem.target_min) <=
                 1e-9 * std::max(1.0, std::abs(problem.target_min));
            if (ok) {
                const Image decoded =
                    decode_solution(best.bits, problem, EncodingSpec::radix2(1));
                for (int r = 0; r < region.height && ok; ++r)
                    for (int c = 0; c < region.width && ok; ++c)
                        ok = decoded.at(r, c) == truth.at(region.row0 + r, region.col0 + c);
            }
        }
        report("exhaustive-oracle equivalence (" + std::to_string(oracle_runs) + " runs)", ok);
    }

    // refinement never touches pixels outside its region
    {
        bool ok = true;
        SolverChoice solver;
        solver.backend = SolverBackend::sa;
        solver.sa.restarts = 2;
        solver.sweeps_per_var = 50;
        for (int run = 0; run < locality_runs && ok; ++run) {
            const int n = 8;
            Image img = random_binary_image(n);
            Geometry g{n, uniform_angles(6), n, 1.0};
            const RayTable rays(g);
            const Sinogram target = radon(random_binary_image(n), rays);
            const int h = 2 + static_cast<int>(rng() % 3);
            const int w = 2 + static_cast<int>(rng() % 3);
            const Region region{static_cast<int>(rng() % (n - h + 1)),
                                static_cast<int>(rng() % (n - w + 1)), h, w};
            const Image before = img;
            RefineOptions opt;
            opt.solve_seed = rng();
            refine_region(img, region, target, rays, EncodingSpec::radix2(1), solver, opt);
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if (!region.contains(i, j))
                        ok = img.at(i, j) == before.at(i, j);
        }
        report("refinement locality (" + std::to_string(locality_runs) + " runs)", ok);
    }

    std::cout << (all_ok ? "verify: all checks passed" : "verify: FAILURES above") << '\n';
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Region-wise QUBO tomographic reconstruction"};
    app.require_subcommand(1);

    // phantom
    auto* phantom = app.add_subcommand("phantom", "Generate a Shepp-Logan test image");
    int ph_size = 100;
    std::string ph_mode = "binary";
    int ph_levels = 4;
    std::string ph_out = "phantom.img";
    phantom->add_option("--size", ph_size, "image side length")->check(CLI::PositiveNumber);
    phantom->add_option("--mode", ph_mode, "binary | integer")
        ->check(CLI::IsMember({"binary", "integer"}));
    phantom->add_option("--levels", ph_levels, "level count for integer mode");
    phantom->add_option("--out", ph_out, "output image path");

    // project
    auto* project = app.add_subcommand("project", "Radon-transform an image to a sinogram");
    std::string pr_image, pr_out = "sinogram.sino";
    int pr_angles = 0, pr_detectors = 0;
    project->add_option("--image", pr_image, "input image")->required();
    project->add_option("--angles", pr_angles, "projection angle count")->required();
    project->add_option("--detectors", pr_detectors, "detector bins (default: image size)");
    project->add_option("--out", pr_out, "output sinogram path");

    // downscale
    auto* down = app.add_subcommand("downscale", "Reduce a sinogram (full-view or sparse-view)");
    std::string dn_sino, dn_out = "downscaled.sino";
    int dn_d1 = 1, dn_d2 = 1, dn_sparse = 0;
    std::string dn_agg = "mean", dn_angle_mode = "pick_second";
    down->add_option("--sinogram", dn_sino, "input sinogram")->required();
    down->add_option("--d1", dn_d1, "angular group size (full-view)");
    down->add_option("--d2", dn_d2, "detector group size (full-view)");
    down->add_option("--sparse-d", dn_sparse, "detector group size (sparse-view mode)");
    down->add_option("--aggregate", dn_agg)->check(CLI::IsMember({"mean", "max", "min"}));
    down->add_option("--angle-mode", dn_angle_mode)
        ->check(CLI::IsMember({"pick_second", "mean_projection"}));
    down->add_option("--out", dn_out, "output sinogram path");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Run a manifest-driven reconstruction");
    std::string rc_manifest;
    Overrides overrides;
    uint64_t rc_seed = 0;
    std::string rc_solver, rc_out_dir;
    double rc_time_limit = 0.0;
    rec->add_option("--manifest", rc_manifest, "JSON run manifest")->required();
    auto* seed_opt = rec->add_option("--seed", rc_seed, "override random seed");
    auto* solver_opt = rec->add_option("--solver", rc_solver, "exhaustive | sa | remote")
                           ->check(CLI::IsMember({"exhaustive", "sa", "remote"}));
    auto* outdir_opt = rec->add_option("--out-dir", rc_out_dir, "output directory");
    auto* tl_opt = rec->add_option("--time-limit", rc_time_limit, "remote time limit (s)");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the oracle/property self-checks");
    std::string vf_level = "tiny";
    uint64_t vf_seed = 20240901;
    verify->add_option("--level", vf_level)->check(CLI::IsMember({"tiny", "full"}));
    verify->add_option("--seed", vf_seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*phantom) {
            const PhantomMode mode = ph_mode == "binary" ? PhantomMode::binary()
                                                         : PhantomMode::integer_levels(ph_levels);
            save_image(generate_shepp_logan(ph_size, mode), ph_out);
            std::cout << "wrote " << ph_out << '\n';
            return 0;
        }
        if (*project) {
            const Image img = load_image(pr_image);
            Geometry g;
            g.image_size = img.height;
            g.detectors = pr_detectors > 0 ? pr_detectors : img.width;
            g.angles = uniform_angles(pr_angles);
            save_sinogram(radon(img, g), pr_out);
            std::cout << "wrote " << pr_out << '\n';
            return 0;
        }
        if (*down) {
            const Sinogram sino = load_sinogram(dn_sino);
            Sinogram out;
            if (dn_sparse > 0) {
                out = downscale_sparse_view(sino, dn_sparse, Aggregate::mean);
            } else {
                DownscaleSpec spec;
                spec.d1 = dn_d1;
                spec.d2 = dn_d2;
                spec.aggregate = dn_agg == "mean" ? Aggregate::mean
                                 : dn_agg == "max" ? Aggregate::max
                                                   : Aggregate::min;
                spec.angle_mode = dn_angle_mode == "pick_second" ? AngleMode::pick_second
                                                                 : AngleMode::mean_projection;
                out = downscale_full_view(sino, spec);
            }
            save_sinogram(out, dn_out);
            std::cout << "wrote " << dn_out << '\n';
            return 0;
        }
        if (*rec) {
            if (*seed_opt)
                overrides.seed = rc_seed;
            if (*solver_opt)
                overrides.solver = rc_solver;
            if (*outdir_opt)
                overrides.out_dir = rc_out_dir;
            if (*tl_opt)
                overrides.time_limit = rc_time_limit;
            return cmd_reconstruct(rc_manifest, overrides);
        }
        if (*verify)
            return cmd_verify(vf_level, vf_seed);
    } catch (const FormatError& e) {
        return fail("format", e.what());
    } catch (const CapacityError& e) {
        return fail("capacity", e.what());
    } catch (const DegenerateProblemError& e) {
        return fail("degenerate-problem", e.what());
    } catch (const TransportError& e) {
        return fail("transport", e.what());
    } catch (const ProtocolError& e) {
        return fail("protocol", e.what());
    } catch (const IntegrityError& e) {
        return fail("integrity", e.what());
    } catch (const std::invalid_argument& e) {
        return fail("invalid-argument", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
