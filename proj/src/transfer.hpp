#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "density.hpp"
#include "series.hpp"

namespace teflow {

/// Estimation knobs shared by all directed-transfer operations.
struct TeParams {
    std::size_t k = 1;        // neighbors for the marginal estimator path
    int order = 0;            // local model order, 0 or 1
    RPolicy policy{};         // how r derives from residual sigma
    std::size_t window = 0;   // Theiler-style exclusion half-width
    std::size_t m = 0;        // first-order fit size; 0 = 2*(dim+1)
    bool keep_logs = false;   // retain per-sample log ratios
};

/// One directed estimate I_{source->target} in bits per step.
struct TeEstimate {
    double value_bits = 0.0;
    std::size_t n_samples = 0;
    double r_joint = 0.0;
    double r_self = 0.0;
    std::size_t clamped = 0;             // log ratios clipped at +/-64 bits
    std::vector<double> per_sample_logs; // filled when keep_logs is set
};

/// All ordered pairs plus the per-channel net flow T_i.
struct FlowResult {
    std::vector<std::string> labels;
    std::vector<double> te_matrix;  // P*P row-major, [i*P+j] = I_{i->j}, zero diagonal
    std::vector<double> net_flow;   // T_i = sum_j (I_{i->j} - I_{j->i})

    std::size_t channel_count() const { return labels.size(); }
};

/// I_{source->target} as the empirical average of
/// log2 p(t_{n+1}|t_n,s_n) / p(t_{n+1}|t_n), each conditional a logistic
/// density centered on its own local-model prediction with r resolved from
/// that model's own residual sigma. Requires aligned embeddings and N >= 20.
TeEstimate transfer_entropy(const StateSeries& source, const StateSeries& target,
                            const TeParams& params = {});

/// Fills every ordered pair of channels; embedding (d, tau) applied to each
/// channel. Pairs may be computed on `threads` workers; the result does not
/// depend on the schedule.
FlowResult te_matrix(const Dataset& dataset, std::size_t d, std::size_t tau,
                     const TeParams& params = {}, std::size_t threads = 1);

/// T_i from an existing P*P matrix (row-major, [i*P+j] = I_{i->j}).
std::vector<double> net_flow_from_matrix(const std::vector<double>& matrix,
                                         std::size_t p);

/// (i_ab - i_ba) / (i_ab + i_ba); +1 means pure a->b transfer.
/// Throws on a zero denominator.
double directionality_index(double i_ab, double i_ba);

/// TE distribution under time-shifted source surrogates.
struct SurrogateSummary {
    double original = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t n_surrogates = 0;
};

/// Recomputes TE with the source state rows cyclically shifted by seeded
/// random offsets of at least N/10 either way. Requires n_surrogates >= 19.
SurrogateSummary surrogate_baseline(const StateSeries& source,
                                    const StateSeries& target,
                                    std::size_t n_surrogates, std::uint64_t seed,
                                    const TeParams& params = {});

}  // namespace teflow
