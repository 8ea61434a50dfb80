#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace teflow::oracle {

// Brute-force reference estimator. Deliberately self-contained: nothing here
// may touch the nearest-neighbor or density modules it is used to validate.

struct BinningConfig {
    std::size_t n_bins = 8;
    bool use_data_range = true;  // per-series min..max; else [lo, hi]
    double lo = 0.0;
    double hi = 1.0;
};

/// Bin index per sample; the last bin is right-closed. Throws on constant
/// series (data range) or out-of-range samples (fixed range).
std::vector<std::size_t> discretize(std::span<const double> values,
                                    const BinningConfig& config);

/// Plug-in transfer entropy in bits per step: discretize both
/// series, histogram the (t_{n+1}, t_n, s_n) transitions, sum
/// p log2(p(t1|t0,s0)/p(t1|t0)) with 0 log 0 = 0.
double te_binned(std::span<const double> source, std::span<const double> target,
                 const BinningConfig& config = {});

}  // namespace teflow::oracle
