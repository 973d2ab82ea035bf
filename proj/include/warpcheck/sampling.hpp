#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/models.hpp"

namespace warpcheck {

struct SamplingParams {
    int count = 100;
    std::uint64_t seed = 42;
    double x_n_lo = 0.5;
    double x_n_hi = 5.0;
    double tangential_bound = 3.0;
};

// mt19937_64 with a hand-rolled uniform map: the raw stream is pinned by the
// standard but std::uniform_real_distribution is not, and reports must be
// byte-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        const double unit = static_cast<double>(gen_() >> 11) * 0x1.0p-53;  // [0, 1)
        return lo + (hi - lo) * unit;
    }

private:
    std::mt19937_64 gen_;
};

// One point inside the safe sampling domain of the chart: upper half-space
// charts keep the last coordinate in [x_n_lo, x_n_hi] away from the boundary,
// the others stay within the tangential bound.
inline std::vector<double> sample_chart_point(ChartKind chart, int dim,
                                              const SamplingParams& params, Rng& rng) {
    if (dim < 1) throw UsageError("sample_chart_point: dimension must be >= 1");
    std::vector<double> point(static_cast<std::size_t>(dim));
    switch (chart) {
        case ChartKind::upper_half_space:
            for (int i = 0; i + 1 < dim; ++i) {
                point[static_cast<std::size_t>(i)] =
                    rng.uniform(-params.tangential_bound, params.tangential_bound);
            }
            point[static_cast<std::size_t>(dim - 1)] = rng.uniform(params.x_n_lo, params.x_n_hi);
            break;
        case ChartKind::stereographic:
        case ChartKind::cartesian:
            for (int i = 0; i < dim; ++i) {
                point[static_cast<std::size_t>(i)] =
                    rng.uniform(-params.tangential_bound, params.tangential_bound);
            }
            break;
    }
    return point;
}

inline std::vector<std::vector<double>> sample_chart_points(ChartKind chart, int dim,
                                                            const SamplingParams& params,
                                                            Rng& rng) {
    if (params.count < 1) throw UsageError("sampling count must be >= 1");
    std::vector<std::vector<double>> points;
    points.reserve(static_cast<std::size_t>(params.count));
    for (int i = 0; i < params.count; ++i) {
        points.push_back(sample_chart_point(chart, dim, params, rng));
    }
    return points;
}

} // namespace warpcheck
