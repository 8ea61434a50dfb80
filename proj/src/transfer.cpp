#include "transfer.hpp"

#include "errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "localmodel.hpp"

namespace teflow {

namespace {

constexpr double kLogClampBits = 64.0;

double successor_range(const StateSeries& s) {
    const auto [lo, hi] = std::minmax_element(s.successors.begin(), s.successors.end());
    return *hi - *lo;
}

}  // namespace

TeEstimate transfer_entropy(const StateSeries& source, const StateSeries& target,
                            const TeParams& params) {
    if (params.order != 0 && params.order != 1) {
        throw std::invalid_argument("local model order must be 0 or 1");
    }
    if (params.k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    const std::size_t n = target.size();
    if (n < 20) {
        throw InsufficientData("transfer entropy needs at least 20 aligned "
                               "states, got " + std::to_string(n));
    }

    // Numerator conditioning space: (target past, source past).
    const StateSeries joint = joint_embed(target, source);
    const NeighborIndex joint_index(joint);
    const NeighborIndex self_index(target);

    const ResidualStats joint_stats =
        residual_sigma(joint, joint_index, params.order, params.m, params.window);
    const ResidualStats self_stats =
        residual_sigma(target, self_index, params.order, params.m, params.window);

    const double range = successor_range(target);
    const double r_joint =
        resolve_r(params.policy, apply_sigma_floor(joint_stats.sigma, range));
    const double r_self =
        resolve_r(params.policy, apply_sigma_floor(self_stats.sigma, range));

    TeEstimate est;
    est.n_samples = n;
    est.r_joint = r_joint;
    est.r_self = r_self;
    if (params.keep_logs) est.per_sample_logs.reserve(n);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const LocalPrediction pj =
            predict_local(joint, joint_index, i, params.order, params.m, params.window);
        const LocalPrediction ps =
            predict_local(target, self_index, i, params.order, params.m, params.window);
        const double y = target.successors[i];
        double log_ratio = (log_cpd(CpdModel{pj.predicted, r_joint}, y) -
                            log_cpd(CpdModel{ps.predicted, r_self}, y)) /
                           std::numbers::ln2;
        if (log_ratio > kLogClampBits) {
            log_ratio = kLogClampBits;
            ++est.clamped;
        } else if (log_ratio < -kLogClampBits) {
            log_ratio = -kLogClampBits;
            ++est.clamped;
        }
        sum += log_ratio;
        if (params.keep_logs) est.per_sample_logs.push_back(log_ratio);
    }
    est.value_bits = sum / static_cast<double>(n);
    return est;
}

FlowResult te_matrix(const Dataset& dataset, std::size_t d, std::size_t tau,
                     const TeParams& params, std::size_t threads) {
    const std::size_t p = dataset.channel_count();
    if (p < 2) {
        throw std::invalid_argument("net-flow analysis needs at least 2 channels");
    }

    std::vector<StateSeries> embedded;
    embedded.reserve(p);
    for (std::size_t c = 0; c < p; ++c) {
        embedded.push_back(delay_embed(dataset.channel(c), d, tau));
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (i != j) pairs.emplace_back(i, j);
        }
    }

    FlowResult result;
    for (std::size_t c = 0; c < p; ++c) result.labels.push_back(dataset.channel(c).name);
    result.te_matrix.assign(p * p, 0.0);

    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, pairs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&]() {
        while (true) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= pairs.size()) break;
            const auto [i, j] = pairs[slot];
            try {
                const TeEstimate est =
                    transfer_entropy(embedded[i], embedded[j], params);
                result.te_matrix[i * p + j] = est.value_bits;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    result.net_flow = net_flow_from_matrix(result.te_matrix, p);
    return result;
}

std::vector<double> net_flow_from_matrix(const std::vector<double>& matrix,
                                         std::size_t p) {
    if (matrix.size() != p * p) {
        throw std::invalid_argument("net flow needs a P*P matrix");
    }
    std::vector<double> net(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double t = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            t += matrix[i * p + j] - matrix[j * p + i];
        }
        net[i] = t;
    }
    return net;
}

double directionality_index(double i_ab, double i_ba) {
    const double denom = i_ab + i_ba;
    if (denom == 0.0) {
        throw std::invalid_argument("directionality index undefined: "
                                    "I_ab + I_ba is zero");
    }
    return (i_ab - i_ba) / denom;
}

SurrogateSummary surrogate_baseline(const StateSeries& source,
                                    const StateSeries& target,
                                    std::size_t n_surrogates, std::uint64_t seed,
                                    const TeParams& params) {
    if (n_surrogates < 19) {
        throw std::invalid_argument("surrogate baseline needs >= 19 surrogates, got " +
                                    std::to_string(n_surrogates));
    }
    const std::size_t n = source.size();
    if (n != target.size()) {
        throw std::invalid_argument("source and target must be aligned");
    }

    SurrogateSummary summary;
    summary.n_surrogates = n_surrogates;
    summary.original = transfer_entropy(source, target, params).value_bits;

    const std::size_t min_offset = std::max<std::size_t>(1, n / 10);
    if (min_offset * 2 >= n) {
        throw InsufficientData("series too short for shift surrogates");
    }
    std::mt19937_64 rng(seed);
    const std::size_t span = n - 2 * min_offset + 1;

    StateSeries shifted = source;
    std::vector<double> values;
    values.reserve(n_surrogates);
    for (std::size_t s = 0; s < n_surrogates; ++s) {
        const std::size_t offset = min_offset + static_cast<std::size_t>(rng() % span);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t from = (i + offset) % n;
            std::copy_n(source.states.data() + from * source.dim, source.dim,
                        shifted.states.data() + i * source.dim);
            shifted.successors[i] = source.successors[from];
        }
        // source_indices stay those of the original so the joint embedding
        // still lines rows up; the shift is the whole point of the surrogate.
        values.push_back(transfer_entropy(shifted, target, params).value_bits);
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    summary.mean = mean;
    summary.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    return summary;
}

}  // namespace teflow
