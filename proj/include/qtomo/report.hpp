#pragma once

#include "qtomo/image.hpp"
#include "qtomo/pipeline.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtomo {

struct ReconReport {
    std::string sample;
    double pixel_accuracy = 0.0;
    double rmse = 0.0;
    double dose_reduction_pct = 0.0;
    double wall_time_s = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_abs_gap = 0.0;
};

/// Fraction of pixels that match exactly after both images are snapped
/// to the declared level set.
double pixel_accuracy(const Image& reconstructed, const Image& reference,
                      const std::vector<double>& levels);

/// Root-mean-square difference of raw values.
double rmse(const Image& a, const Image& b);

/// (1 - n/N) * 100, the projection-data (and dose) reduction from
/// initializing at n instead of N pixels per side.
double dose_reduction(int n, int N);

/// Deterministic CSV, header plus one row per ledger record:
/// sample,iteration,region,runtime_s,target_min,achieved,abs_gap
/// Regions print as S1..Sk; S0 is the initial whole-image solve.
std::string render_gap_table(std::span<const RefinementRecord> ledger, std::string_view sample);

/// |a - b| per pixel, for PGM difference snapshots.
Image difference_image(const Image& a, const Image& b);

ReconReport make_report(const ReconstructionResult& result, const Image& reference,
                        const std::vector<double>& levels, int initial_size);

std::string report_to_json(const ReconReport& report);

} // namespace qtomo
