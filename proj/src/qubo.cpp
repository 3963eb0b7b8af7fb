#include "qtomo/qubo.hpp"

#include "qtomo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtomo {

namespace {
constexpr double kPruneThreshold = 1e-12;

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
} // namespace

double QuboProblem::coeff(int i, int j) const {
    if (i > j)
        std::swap(i, j);
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                               [](const QuboEntry& e, const std::pair<int, int>& k) {
                                   return e.i != k.first ? e.i < k.first : e.j < k.second;
                               });
    if (it != entries.end() && it->i == i && it->j == j)
        return it->coeff;
    return 0.0;
}

QuboProblem build_region_qubo(const Image& fixed_image, const Region& region,
                              const Sinogram& target_sino, const Geometry& geometry,
                              const EncodingSpec& encoding) {
    return build_region_qubo(fixed_image, region, target_sino, RayTable(geometry), encoding);
}

QuboProblem build_region_qubo(const Image& fixed_image, const Region& region,
                              const Sinogram& target_sino, const RayTable& rays,
                              const EncodingSpec& encoding) {
    const Geometry& geometry = rays.geometry();
    encoding.validate();
    validate_region_in(region, fixed_image.height, fixed_image.width);
    if (fixed_image.height != geometry.image_size || fixed_image.width != geometry.image_size)
        throw std::invalid_argument("build_region_qubo: image size does not match geometry");
    if (!(target_sino.geometry == geometry))
        throw std::invalid_argument("build_region_qubo: target sinogram geometry mismatch");

    const auto weights = encoding.basis_weights();
    const double offset = encoding.affine_offset();
    const int m = static_cast<int>(weights.size());

    QuboProblem problem;
    problem.region_height = region.height;
    problem.region_width = region.width;
    problem.n_vars = region.height * region.width * m;
    problem.var_map.reserve(problem.n_vars);
    for (int r = 0; r < region.height; ++r)
        for (int c = 0; c < region.width; ++c)
            for (int b = 0; b < m; ++b)
                problem.var_map.push_back({static_cast<int16_t>(r), static_cast<int16_t>(c),
                                           static_cast<int16_t>(b)});

    const Sinogram pz = zero_masked_sinogram(fixed_image, region, rays);

    // region pixel index per image pixel, -1 outside
    std::vector<int> region_index(fixed_image.pixel_count(), -1);
    for (int r = 0; r < region.height; ++r)
        for (int c = 0; c < region.width; ++c)
            region_index[static_cast<size_t>(region.row0 + r) * fixed_image.width +
                         (region.col0 + c)] = r * region.width + c;

    struct Triplet {
        int32_t i, j;
        double v;
    };
    std::vector<Triplet> quad;
    std::vector<double> linear(problem.n_vars, 0.0);
    double target_min = 0.0;
    bool any_coverage = false;

    std::vector<std::pair<int, double>> active; // (region pixel, c weight) on the ray
    for (int a = 0; a < target_sino.n_angles(); ++a) {
        for (int d = 0; d < target_sino.n_detectors(); ++d) {
            active.clear();
            double offset_projection = 0.0;
            for (const RayWeight& w : rays.ray(a, d)) {
                const int p = region_index[w.pixel];
                if (p >= 0) {
                    active.push_back({p, w.weight});
                    offset_projection += w.weight;
                }
            }
            const double dval = target_sino.at(a, d) - pz.at(a, d) - offset * offset_projection;
            target_min -= dval * dval;
            if (active.empty())
                continue;
            any_coverage = true;
            for (size_t pa = 0; pa < active.size(); ++pa) {
                const int base_u = active[pa].first * m;
                const double cu = active[pa].second;
                for (int bu = 0; bu < m; ++bu) {
                    const double au = cu * weights[bu];
                    const int u = base_u + bu;
                    linear[u] -= 2.0 * au * dval;
                    quad.push_back({u, u, au * au});
                    // remaining bits of the same pixel
                    for (int bv = bu + 1; bv < m; ++bv)
                        quad.push_back({u, base_u + bv, 2.0 * au * cu * weights[bv]});
                    // later pixels on the same ray
                    for (size_t pb = pa + 1; pb < active.size(); ++pb) {
                        const int base_v = active[pb].first * m;
                        const double cv = active[pb].second;
                        for (int bv = 0; bv < m; ++bv) {
                            const int v = base_v + bv;
                            const double prod = 2.0 * au * cv * weights[bv];
                            if (u <= v)
                                quad.push_back({u, v, prod});
                            else
                                quad.push_back({v, u, prod});
                        }
                    }
                }
            }
        }
    }

    if (!any_coverage)
        throw DegenerateProblemError(
            "build_region_qubo: no ray intersects the region; nothing to optimize");

    std::stable_sort(quad.begin(), quad.end(), [](const Triplet& a, const Triplet& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    problem.entries.reserve(quad.size() / 4 + problem.n_vars);
    for (size_t k = 0; k < quad.size();) {
        const int32_t i = quad[k].i;
        const int32_t j = quad[k].j;
        double acc = 0.0;
        while (k < quad.size() && quad[k].i == i && quad[k].j == j)
            acc += quad[k++].v;
        if (i == j)
            acc += linear[i];
        if (std::abs(acc) >= kPruneThreshold)
            problem.entries.push_back({i, j, acc});
    }
    problem.target_min = target_min;
    return problem;
}

double target_minimum_energy(const DifferenceSinogram& d) {
    double acc = 0.0;
    for (double v : d.values)
        acc += v * v;
    return -acc;
}

double evaluate_energy(const QuboProblem& problem, std::span<const uint8_t> bits) {
    if (bits.size() != static_cast<size_t>(problem.n_vars))
        throw std::invalid_argument("evaluate_energy: bit count mismatch");
    double e = 0.0;
    for (const QuboEntry& q : problem.entries)
        if (bits[q.i] && bits[q.j])
            e += q.coeff;
    return e;
}

Image decode_solution(std::span<const uint8_t> bits, const QuboProblem& problem,
                      const EncodingSpec& encoding) {
    if (bits.size() != static_cast<size_t>(problem.n_vars))
        throw std::invalid_argument("decode_solution: bit count mismatch");
    const int m = encoding.bits_per_pixel();
    Image out(problem.region_height, problem.region_width);
    std::vector<uint8_t> pixel_bits(m);
    for (int v = 0; v < problem.n_vars; v += m) {
        const VarPixel& vp = problem.var_map[v];
        for (int b = 0; b < m; ++b)
            pixel_bits[b] = bits[v + b];
        out.at(vp.row, vp.col) = encoding.decode(pixel_bits);
    }
    return out;
}

void save_qubo(const QuboProblem& problem, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw FormatError("save_qubo: cannot open " + path);
    f << "QUBO " << problem.n_vars << ' ' << problem.entries.size() << ' '
      << fmt_double(problem.target_min) << '\n';
    for (const QuboEntry& q : problem.entries)
        f << q.i << ' ' << q.j << ' ' << fmt_double(q.coeff) << '\n';
    if (!f)
        throw FormatError("save_qubo: write failed for " + path);

    std::ofstream vm(path + ".varmap");
    if (!vm)
        throw FormatError("save_qubo: cannot open " + path + ".varmap");
    for (size_t v = 0; v < problem.var_map.size(); ++v)
        vm << v << ' ' << problem.var_map[v].row << ' ' << problem.var_map[v].col << ' '
           << problem.var_map[v].bit << '\n';
}

QuboProblem load_qubo(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw FormatError("load_qubo: cannot open " + path);
    std::string magic;
    size_t n_entries = 0;
    QuboProblem problem;
    f >> magic >> problem.n_vars >> n_entries >> problem.target_min;
    if (!f || magic != "QUBO")
        throw FormatError("load_qubo: bad header in " + path);
    if (problem.n_vars < 0)
        throw FormatError("load_qubo: negative variable count");
    problem.entries.resize(n_entries);
    for (size_t k = 0; k < n_entries; ++k) {
        QuboEntry& q = problem.entries[k];
        f >> q.i >> q.j >> q.coeff;
        if (!f)
            throw FormatError("load_qubo: truncated entry list in " + path);
        if (q.i < 0 || q.j < q.i || q.j >= problem.n_vars)
            throw FormatError("load_qubo: entry indices out of range");
    }

    std::ifstream vm(path + ".varmap");
    if (vm) {
        problem.var_map.resize(problem.n_vars);
        int maxr = -1, maxc = -1;
        for (int k = 0; k < problem.n_vars; ++k) {
            size_t v = 0;
            int r = 0, c = 0, b = 0;
            vm >> v >> r >> c >> b;
            if (!vm || v != static_cast<size_t>(k))
                throw FormatError("load_qubo: malformed varmap for " + path);
            problem.var_map[k] = {static_cast<int16_t>(r), static_cast<int16_t>(c),
                                  static_cast<int16_t>(b)};
            maxr = std::max(maxr, r);
            maxc = std::max(maxc, c);
        }
        problem.region_height = maxr + 1;
        problem.region_width = maxc + 1;
    }
    return problem;
}

} // namespace qtomo
