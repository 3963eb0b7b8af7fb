#pragma once

#include "qtomo/encoding.hpp"
#include "qtomo/geometry.hpp"
#include "qtomo/image.hpp"
#include "qtomo/projector.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qtomo {

struct QuboEntry {
    int32_t i = 0;
    int32_t j = 0; // i <= j; i == j holds the merged linear term
    double coeff = 0.0;
};

/// Region-local coordinates of one binary variable.
struct VarPixel {
    int16_t row = 0;
    int16_t col = 0;
    int16_t bit = 0;
};

/// Upper-triangular QUBO in merged form: linear terms are folded into
/// the diagonal (x^2 = x), the constant sum D^2 is kept out of the
/// coefficients as `target_min` = -sum D^2. The all-zeros assignment
/// therefore always has energy 0.
struct QuboProblem {
    int n_vars = 0;
    std::vector<QuboEntry> entries; // sorted by (i, j), merged, pruned
    std::vector<VarPixel> var_map;  // variable index -> (region pixel, bit)
    double target_min = 0.0;
    int region_height = 0;
    int region_width = 0;

    /// Coefficient lookup, 0 when absent. O(log n), meant for tests.
    double coeff(int i, int j) const;
};

/// Outcome of one solver invocation. `runtime_s` is the backend's
/// deterministic nominal runtime (cost model, or the remote service's
/// reported figure), so ledgers reproduce byte-for-byte under a fixed
/// seed; wall-clock time is tracked separately by callers that need it.
struct SolveResult {
    std::vector<uint8_t> bits;
    double energy = 0.0;
    std::string solver_id;
    uint64_t seed = 0;
    double runtime_s = 0.0;
};

/// Build the QUBO for one region against a target sinogram.
///
/// D = target - radon(fixed image with the region zeroed); variable
/// v = (pixel, bit) contributes a_v = c_ij * w_bit per ray. Merged
/// coefficients: diag(v) = sum a_v^2 - 2 sum a_v D', offdiag(u<v) =
/// 2 sum a_u a_v, where D' subtracts the projection of any per-pixel
/// affine offset. Variables are ordered row-major over region pixels,
/// bit-minor. Coefficients below 1e-12 in magnitude are dropped.
QuboProblem build_region_qubo(const Image& fixed_image, const Region& region,
                              const Sinogram& target_sino, const Geometry& geometry,
                              const EncodingSpec& encoding);
QuboProblem build_region_qubo(const Image& fixed_image, const Region& region,
                              const Sinogram& target_sino, const RayTable& rays,
                              const EncodingSpec& encoding);

/// -sum D(theta, s)^2, the analytic optimum of the region QUBO.
double target_minimum_energy(const DifferenceSinogram& d);

/// sum_{i<=j} coeff(i,j) x_i x_j.
double evaluate_energy(const QuboProblem& problem, std::span<const uint8_t> bits);

/// Map a solution bitstring back to region pixel values.
Image decode_solution(std::span<const uint8_t> bits, const QuboProblem& problem,
                      const EncodingSpec& encoding);

/// Text format: "QUBO <n_vars> <n_entries> <target_min>" then "i j coeff"
/// lines; the variable map goes to "<path>.varmap" as "v row col bit".
void save_qubo(const QuboProblem& problem, const std::string& path);
QuboProblem load_qubo(const std::string& path);

} // namespace qtomo
