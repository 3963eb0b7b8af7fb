#include "qtomo/pipeline.hpp"

#include "qtomo/errors.hpp"
#include "qtomo/projector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtomo {
namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4B9FEull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

SolveResult run_backend(const SolverChoice& solver, const QuboProblem& problem,
                        std::span<const uint8_t> warm_start, uint64_t call_seed) {
    switch (solver.backend) {
    case SolverBackend::exhaustive:
        return solve_exhaustive(problem);
    case SolverBackend::sa: {
        AnnealParams params = solver.sa;
        params.seed = call_seed;
        if (params.sweeps == 0)
            params.sweeps = solver.sweeps_per_var * std::max(problem.n_vars, 1);
        return solve_sa(problem, params, warm_start);
    }
    case SolverBackend::remote:
        return solve_remote(problem, solver.remote);
    }
    throw std::invalid_argument("unknown solver backend");
}

void check_variable_budget(long long n_vars, int budget, const std::string& what) {
    if (n_vars > budget)
        throw CapacityError(what + " needs " + std::to_string(n_vars) +
                            " variables, over the configured budget of " +
                            std::to_string(budget));
}

} // namespace

std::vector<Region> partition_regions(int image_size, int region_size, int overlap) {
    if (image_size < 1)
        throw std::invalid_argument("partition_regions: image_size must be >= 1");
    if (region_size < 1 || region_size > image_size)
        throw std::invalid_argument("partition_regions: region size must be in [1, image_size]");
    if (overlap < 0 || overlap >= region_size)
        throw std::invalid_argument("partition_regions: overlap must be in [0, region_size)");
    if (overlap == 0 && image_size % region_size != 0)
        throw std::invalid_argument("partition_regions: image_size not divisible by region_size");

    const int step = region_size - overlap;
    std::vector<int> positions;
    for (int r = 0;; r += step) {
        const int clamped = std::min(r, image_size - region_size);
        if (positions.empty() || positions.back() != clamped)
            positions.push_back(clamped);
        if (r + region_size >= image_size)
            break;
    }

    std::vector<Region> regions;
    regions.reserve(positions.size() * positions.size());
    for (int r : positions)
        for (int c : positions)
            regions.push_back({r, c, region_size, region_size});
    return regions;
}

RefinementRecord refine_region(Image& current_image, const Region& region,
                               const Sinogram& target_sino, const RayTable& rays,
                               const EncodingSpec& encoding, const SolverChoice& solver,
                               const RefineOptions& options) {
    RefinementRecord rec;
    rec.iteration = options.iteration;
    rec.region_id = options.region_id;

    QuboProblem problem;
    try {
        problem = build_region_qubo(current_image, region, target_sino, rays, encoding);
    } catch (const DegenerateProblemError&) {
        // nothing to optimize; leave the region as it is
        return rec;
    }

    // warm start from the region's current content
    const int m = encoding.bits_per_pixel();
    std::vector<uint8_t> warm(problem.n_vars, 0);
    for (int v = 0; v < problem.n_vars; v += m) {
        const VarPixel& vp = problem.var_map[v];
        const auto bits =
            encoding.encode_value(current_image.at(region.row0 + vp.row, region.col0 + vp.col));
        std::copy(bits.begin(), bits.end(), warm.begin() + v);
    }

    const SolveResult solved = run_backend(solver, problem, warm, options.solve_seed);
    const double achieved = evaluate_energy(problem, solved.bits);

    const Image decoded = decode_solution(solved.bits, problem, encoding);
    for (int r = 0; r < region.height; ++r)
        for (int c = 0; c < region.width; ++c)
            current_image.at(region.row0 + r, region.col0 + c) = decoded.at(r, c);

    rec.target_min = problem.target_min;
    rec.achieved = achieved;
    rec.abs_gap = std::abs(problem.target_min - achieved);
    rec.runtime_s = solved.runtime_s;
    return rec;
}

namespace {

// One refinement pass target: the image size it runs at, the sinogram
// it matches, and the local post-processing / iteration knobs.
struct Phase {
    Sinogram target;
    Interp interp = Interp::nearest;
    PostProcess post = PostProcess::none;
    double sigma = 1.0;
    int max_iters = 5;
    double tol = 1e-3;
    int region_size = 0;
};

ReconstructionResult run_pipeline(const Sinogram& initial_target, std::vector<Phase> phases,
                                  const ReconstructConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    config.encoding.validate();
    initial_target.validate();

    ReconstructionResult out;
    out.sample = config.sample;

    uint64_t call_index = 0;
    auto next_seed = [&config, &call_index] {
        return splitmix64(config.seed ^ splitmix64(++call_index));
    };

    // initial whole-image reconstruction at the smallest resolution
    const int n1 = initial_target.geometry.image_size;
    const int bits = config.encoding.bits_per_pixel();
    check_variable_budget(static_cast<long long>(n1) * n1 * bits, config.variable_budget,
                          "initial whole-image QUBO at " + std::to_string(n1) + "x" +
                              std::to_string(n1));
    {
        RayTable rays(initial_target.geometry);
        Image zeros(n1, n1, 0.0);
        const Region whole{0, 0, n1, n1};
        const QuboProblem problem =
            build_region_qubo(zeros, whole, initial_target, rays, config.encoding);
        const SolveResult solved = run_backend(config.solver, problem, {}, next_seed());
        const double achieved = evaluate_energy(problem, solved.bits);
        out.image = decode_solution(solved.bits, problem, config.encoding);
        out.ledger.push_back({0, 0, problem.target_min, achieved,
                              std::abs(problem.target_min - achieved), solved.runtime_s});
    }

    for (const Phase& phase : phases) {
        const int size = phase.target.geometry.image_size;
        if (size < out.image.height)
            throw std::invalid_argument("pipeline: phase size below current image size");
        if (size != out.image.height)
            out.image = upscale_image(out.image, size, phase.interp);

        check_variable_budget(static_cast<long long>(phase.region_size) * phase.region_size *
                                  bits,
                              config.variable_budget,
                              "region QUBO at " + std::to_string(phase.region_size) + "x" +
                                  std::to_string(phase.region_size));

        const RayTable rays(phase.target.geometry);
        const auto regions = partition_regions(size, phase.region_size, config.region_overlap);
        std::vector<int> schedule;
        if (config.region_schedule) {
            schedule = *config.region_schedule;
            for (int id : schedule)
                if (id < 1 || id > static_cast<int>(regions.size()))
                    throw std::invalid_argument("pipeline: region schedule id out of range");
        } else {
            schedule.resize(regions.size());
            for (size_t k = 0; k < regions.size(); ++k)
                schedule[k] = static_cast<int>(k) + 1;
        }

        out.converged = false;
        for (int it = 1; it <= phase.max_iters; ++it) {
            for (int id : schedule) {
                RefineOptions opt;
                opt.solve_seed = next_seed();
                opt.iteration = it;
                opt.region_id = id;
                out.ledger.push_back(refine_region(out.image, regions[id - 1], phase.target,
                                                   rays, config.encoding, config.solver, opt));
            }
            ++out.iterations_run;

            const Sinogram generated = radon(out.image, rays);
            if (convergence_check(generated, phase.target, phase.tol)) {
                out.converged = true;
                break;
            }
            if (it < phase.max_iters) {
                if (phase.post == PostProcess::gaussian) {
                    out.image = gaussian_filter(out.image, phase.sigma);
                } else if (phase.post == PostProcess::hole_fill) {
                    const auto levels = config.encoding.representable_levels();
                    out.image = hole_fill(quantize_to_levels(out.image, levels), levels);
                }
            }
        }
    }

    out.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

Phase final_phase(const Sinogram& sino, int region_size, const ReconstructConfig& config) {
    Phase phase;
    phase.target = sino;
    phase.interp = config.upscale;
    phase.post = config.post;
    phase.sigma = config.gaussian_sigma;
    phase.max_iters = config.max_iterations;
    phase.tol = config.convergence_tol;
    phase.region_size = region_size;
    return phase;
}

} // namespace

ReconstructionResult single_stage_reconstruct(const Sinogram& sino_full,
                                              const ReconstructConfig& config) {
    const Sinogram reduced = downscale_full_view(sino_full, config.downscale);
    const int n1 = reduced.geometry.image_size;
    const int region = config.region_size > 0 ? config.region_size : n1;
    return run_pipeline(reduced, {final_phase(sino_full, region, config)}, config);
}

void StagePlan::validate(int final_size) const {
    if (stages.empty())
        throw std::invalid_argument("stage plan: no stages");
    for (size_t k = 0; k < stages.size(); ++k) {
        if (stages[k].image_size < 1)
            throw std::invalid_argument("stage plan: non-positive stage size");
        if (k > 0 && stages[k].image_size <= stages[k - 1].image_size)
            throw std::invalid_argument("stage plan: sizes must be strictly increasing");
        if (stages[k].max_refine_iterations < 1)
            throw std::invalid_argument("stage plan: max_refine_iterations must be >= 1");
    }
    if (stages.back().image_size > final_size)
        throw std::invalid_argument("stage plan: final stage exceeds target size");
}

ReconstructionResult multi_stage_reconstruct(const Sinogram& sino_full, const StagePlan& plan,
                                             const ReconstructConfig& config) {
    const int final_size = sino_full.geometry.image_size;
    plan.validate(final_size);

    std::vector<Sinogram> targets;
    targets.reserve(plan.stages.size());
    for (const StageSpec& stage : plan.stages) {
        Sinogram t = downscale_full_view(sino_full, stage.downscale);
        if (t.geometry.image_size != stage.image_size)
            throw std::invalid_argument(
                "stage plan: downscale spec yields image size " +
                std::to_string(t.geometry.image_size) + ", stage declares " +
                std::to_string(stage.image_size));
        targets.push_back(std::move(t));
    }

    std::vector<Phase> phases;
    for (size_t k = 1; k < plan.stages.size(); ++k) {
        const StageSpec& stage = plan.stages[k];
        Phase phase;
        phase.target = targets[k];
        phase.interp = stage.interp;
        phase.post = stage.gaussian_sigma ? PostProcess::gaussian : config.post;
        phase.sigma = stage.gaussian_sigma.value_or(config.gaussian_sigma);
        phase.max_iters = stage.max_refine_iterations;
        phase.tol = stage.convergence_tol;
        phase.region_size = plan.stages[k - 1].image_size;
        phases.push_back(std::move(phase));
    }
    if (plan.stages.back().image_size < final_size)
        phases.push_back(final_phase(sino_full, plan.stages.back().image_size, config));

    return run_pipeline(targets.front(), std::move(phases), config);
}

ReconstructionResult sparse_view_reconstruct(const Sinogram& sino_sparse,
                                             const ReconstructConfig& config) {
    const Sinogram reduced =
        downscale_sparse_view(sino_sparse, config.sparse_detector_group, config.sparse_aggregate);
    const int n1 = reduced.geometry.image_size;
    const int region = config.region_size > 0 ? config.region_size : n1;
    return run_pipeline(reduced, {final_phase(sino_sparse, region, config)}, config);
}

Image hole_fill(const Image& image, const std::vector<double>& levels) {
    if (levels.empty())
        throw std::invalid_argument("hole_fill: level set must be declared");
    Image out = image;
    for (int i = 1; i + 1 < image.height; ++i) {
        for (int j = 1; j + 1 < image.width; ++j) {
            const double v = image.at(i, j);
            const double up = image.at(i - 1, j);
            if (up == v)
                continue;
            const double down = image.at(i + 1, j);
            const double left = image.at(i, j - 1);
            const double right = image.at(i, j + 1);
            if (down != up || left != up || right != up)
                continue;
            // all four orthogonal neighbors agree on a different value;
            // fill only if the pixel is an isolated component (diagonals
            // differ too, which keeps checkerboards stable)
            if (image.at(i - 1, j - 1) == v || image.at(i - 1, j + 1) == v ||
                image.at(i + 1, j - 1) == v || image.at(i + 1, j + 1) == v)
                continue;
            out.at(i, j) = up;
        }
    }
    return out;
}

bool convergence_check(const Sinogram& generated, const Sinogram& target, double tol) {
    if (generated.n_angles() != target.n_angles() ||
        generated.n_detectors() != target.n_detectors())
        throw std::invalid_argument("convergence_check: shape mismatch");
    double num = 0.0;
    double den = 0.0;
    for (size_t k = 0; k < generated.values.size(); ++k) {
        const double d = generated.values[k] - target.values[k];
        num += d * d;
        den += target.values[k] * target.values[k];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-12) <= tol;
}

} // namespace qtomo
