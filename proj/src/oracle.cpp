#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace teflow::oracle {

namespace {
constexpr std::size_t kMaxBins = 64;  // keeps the dense 3-D histogram small
}

std::vector<std::size_t> discretize(std::span<const double> values,
                                    const BinningConfig& config) {
    if (config.n_bins < 2 || config.n_bins > kMaxBins) {
        throw std::invalid_argument("n_bins must lie in [2, " +
                                    std::to_string(kMaxBins) + "], got " +
                                    std::to_string(config.n_bins));
    }
    if (values.empty()) {
        throw std::invalid_argument("cannot discretize an empty series");
    }

    double lo = config.lo;
    double hi = config.hi;
    if (config.use_data_range) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = *mn;
        hi = *mx;
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("degenerate series: bin range [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] has zero width");
    }

    const double width = hi - lo;
    const double b = static_cast<double>(config.n_bins);
    std::vector<std::size_t> bins;
    bins.reserve(values.size());
    for (double v : values) {
        if (v < lo || v > hi) {
            throw std::invalid_argument("sample " + std::to_string(v) +
                                        " outside fixed bin range [" +
                                        std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
        }
        auto idx = static_cast<std::size_t>((v - lo) / width * b);
        bins.push_back(std::min(idx, config.n_bins - 1));
    }
    return bins;
}

double te_binned(std::span<const double> source, std::span<const double> target,
                 const BinningConfig& config) {
    if (source.size() != target.size()) {
        throw std::invalid_argument("source and target lengths differ (" +
                                    std::to_string(source.size()) + " vs " +
                                    std::to_string(target.size()) + ")");
    }
    if (source.size() < 3 * config.n_bins) {
        throw std::invalid_argument("need at least 3*n_bins = " +
                                    std::to_string(3 * config.n_bins) +
                                    " samples, got " + std::to_string(source.size()));
    }

    const std::vector<std::size_t> s = discretize(source, config);
    const std::vector<std::size_t> t = discretize(target, config);
    const std::size_t b = config.n_bins;
    const std::size_t transitions = t.size() - 1;

    // Counts over (t_{n+1}, t_n, s_n) and its marginals.
    std::vector<std::size_t> c3(b * b * b, 0);   // [t1][t0][s0]
    std::vector<std::size_t> c_t0s0(b * b, 0);
    std::vector<std::size_t> c_t1t0(b * b, 0);
    std::vector<std::size_t> c_t0(b, 0);
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        const std::size_t t1 = t[n + 1];
        const std::size_t t0 = t[n];
        const std::size_t s0 = s[n];
        ++c3[(t1 * b + t0) * b + s0];
        ++c_t0s0[t0 * b + s0];
        ++c_t1t0[t1 * b + t0];
        ++c_t0[t0];
    }

    // sum p(t1,t0,s0) log2[ p(t1|t0,s0) / p(t1|t0) ], expressed in counts.
    double te = 0.0;
    const double m = static_cast<double>(transitions);
    for (std::size_t t1 = 0; t1 < b; ++t1) {
        for (std::size_t t0 = 0; t0 < b; ++t0) {
            for (std::size_t s0 = 0; s0 < b; ++s0) {
                const std::size_t n3 = c3[(t1 * b + t0) * b + s0];
                if (n3 == 0) continue;
                const double num = static_cast<double>(n3) *
                                   static_cast<double>(c_t0[t0]);
                const double den = static_cast<double>(c_t0s0[t0 * b + s0]) *
                                   static_cast<double>(c_t1t0[t1 * b + t0]);
                te += (static_cast<double>(n3) / m) * std::log2(num / den);
            }
        }
    }
    return te;
}

}  // namespace teflow::oracle
