#pragma once

#include "qtomo/encoding.hpp"
#include "qtomo/geometry.hpp"
#include "qtomo/image.hpp"
#include "qtomo/qubo.hpp"
#include "qtomo/remote.hpp"
#include "qtomo/resample.hpp"
#include "qtomo/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qtomo {

/// One ledger row per solved QUBO, mirroring the per-region gap table.
/// region_id 0 is the initial whole-image reconstruction, 1..R are the
/// refinement regions in row-major order.
struct RefinementRecord {
    int iteration = 0;
    int region_id = 0;
    double target_min = 0.0;
    double achieved = 0.0;
    double abs_gap = 0.0;
    double runtime_s = 0.0;
};

enum class SolverBackend { exhaustive, sa, remote };

struct SolverChoice {
    SolverBackend backend = SolverBackend::sa;
    AnnealParams sa;
    int64_t sweeps_per_var = 200; // used when sa.sweeps == 0
    EndpointConfig remote;
};

enum class PostProcess { none, gaussian, hole_fill };

/// Shared knobs for all reconstruction strategies.
struct ReconstructConfig {
    std::string sample = "sample";
    EncodingSpec encoding = EncodingSpec::radix2(1);

    DownscaleSpec downscale;        // full-view strategies
    int sparse_detector_group = 2;  // sparse-view strategy
    Aggregate sparse_aggregate = Aggregate::mean;

    Interp upscale = Interp::nearest;
    int region_size = 0;  // 0 derives the low-resolution size n
    int region_overlap = 0;
    std::optional<std::vector<int>> region_schedule; // explicit region revisit order (1-based)

    int max_iterations = 5;
    double convergence_tol = 1e-3;
    PostProcess post = PostProcess::none;
    double gaussian_sigma = 1.0;

    SolverChoice solver;
    uint64_t seed = 1;
    int variable_budget = 8192; // cap on n^2 * m for any single QUBO
};

/// One multi-stage step: refine an image of `image_size` pixels per side
/// against the full sinogram downscaled by `downscale`.
struct StageSpec {
    int image_size = 0;
    DownscaleSpec downscale;
    Interp interp = Interp::nearest;
    std::optional<double> gaussian_sigma;
    int max_refine_iterations = 5;
    double convergence_tol = 1e-3;
};

/// Ordered stage sizes, strictly increasing; the final target size N is
/// appended automatically when the last stage is smaller.
struct StagePlan {
    std::vector<StageSpec> stages;

    void validate(int final_size) const;
};

struct ReconstructionResult {
    Image image;
    std::vector<RefinementRecord> ledger;
    std::string sample;
    bool converged = false;
    int iterations_run = 0;
    double wall_time_s = 0.0;
};

/// Row-major tiling; with overlap > 0 regions step by size - overlap and
/// the last row/column clamps to the image edge for full coverage.
std::vector<Region> partition_regions(int image_size, int region_size, int overlap);

struct RefineOptions {
    uint64_t solve_seed = 1;
    int iteration = 1;
    int region_id = 1;
};

/// One region refinement step: zero the region, isolate its sinogram
/// contribution, build and solve the QUBO, write the decoded pixels
/// back. Pixels outside the region are untouched. A degenerate QUBO
/// (no ray coverage) leaves the region unchanged and is recorded with
/// zero target and gap.
RefinementRecord refine_region(Image& current_image, const Region& region,
                               const Sinogram& target_sino, const RayTable& rays,
                               const EncodingSpec& encoding, const SolverChoice& solver,
                               const RefineOptions& options);

ReconstructionResult single_stage_reconstruct(const Sinogram& sino_full,
                                              const ReconstructConfig& config);
ReconstructionResult multi_stage_reconstruct(const Sinogram& sino_full, const StagePlan& plan,
                                             const ReconstructConfig& config);
ReconstructionResult sparse_view_reconstruct(const Sinogram& sino_sparse,
                                             const ReconstructConfig& config);

/// Replace isolated single-pixel components: a pixel whose eight
/// neighbors all differ from it and whose four orthogonal neighbors
/// agree on one value takes that value. Idempotent.
Image hole_fill(const Image& image, const std::vector<double>& levels);

/// Relative L2 residual test: ||gen - target|| / max(||target||, 1e-12) <= tol.
bool convergence_check(const Sinogram& generated, const Sinogram& target, double tol);

} // namespace qtomo
