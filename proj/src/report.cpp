#include "qtomo/report.hpp"

#include "qtomo/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtomo {
namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

double pixel_accuracy(const Image& reconstructed, const Image& reference,
                      const std::vector<double>& levels) {
    if (!reconstructed.same_shape(reference))
        throw std::invalid_argument("pixel_accuracy: dimension mismatch");
    if (reconstructed.pixel_count() == 0)
        throw std::invalid_argument("pixel_accuracy: empty image");
    const Image a = quantize_to_levels(reconstructed, levels);
    const Image b = quantize_to_levels(reference, levels);
    size_t matches = 0;
    for (size_t k = 0; k < a.values.size(); ++k)
        if (a.values[k] == b.values[k])
            ++matches;
    return static_cast<double>(matches) / static_cast<double>(a.values.size());
}

double rmse(const Image& a, const Image& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("rmse: dimension mismatch");
    if (a.pixel_count() == 0)
        throw std::invalid_argument("rmse: empty image");
    double acc = 0.0;
    for (size_t k = 0; k < a.values.size(); ++k) {
        const double d = a.values[k] - b.values[k];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.values.size()));
}

double dose_reduction(int n, int N) {
    if (n <= 0 || N <= 0)
        throw std::invalid_argument("dose_reduction: sides must be positive");
    if (n > N)
        throw std::invalid_argument("dose_reduction: initial side exceeds final side");
    return 100.0 * static_cast<double>(N - n) / static_cast<double>(N);
}

std::string render_gap_table(std::span<const RefinementRecord> ledger,
                             std::string_view sample) {
    if (ledger.empty())
        throw std::invalid_argument("render_gap_table: empty ledger");
    std::ostringstream out;
    out << "sample,iteration,region,runtime_s,target_min,achieved,abs_gap\n";
    for (const RefinementRecord& r : ledger) {
        out << sample << ',' << r.iteration << ",S" << r.region_id << ','
            << fmt_double(r.runtime_s) << ',' << fmt_double(r.target_min) << ','
            << fmt_double(r.achieved) << ',' << fmt_double(r.abs_gap) << '\n';
    }
    return out.str();
}

Image difference_image(const Image& a, const Image& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("difference_image: dimension mismatch");
    Image out(a.height, a.width);
    for (size_t k = 0; k < a.values.size(); ++k)
        out.values[k] = std::abs(a.values[k] - b.values[k]);
    return out;
}

ReconReport make_report(const ReconstructionResult& result, const Image& reference,
                        const std::vector<double>& levels, int initial_size) {
    ReconReport rep;
    rep.sample = result.sample;
    rep.pixel_accuracy = pixel_accuracy(result.image, reference, levels);
    rep.rmse = rmse(result.image, reference);
    rep.dose_reduction_pct = dose_reduction(initial_size, result.image.height);
    rep.wall_time_s = result.wall_time_s;
    rep.iterations = result.iterations_run;
    rep.converged = result.converged;
    rep.final_abs_gap = result.ledger.empty() ? 0.0 : result.ledger.back().abs_gap;
    return rep;
}

std::string report_to_json(const ReconReport& report) {
    nlohmann::json j;
    j["sample"] = report.sample;
    j["pixel_accuracy"] = report.pixel_accuracy;
    j["rmse"] = report.rmse;
    j["dose_reduction_pct"] = report.dose_reduction_pct;
    j["wall_time_s"] = report.wall_time_s;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["final_abs_gap"] = report.final_abs_gap;
    return j.dump(2) + "\n";
}

} // namespace qtomo
