#include "teflow/teflow.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "oracle.hpp"
#include "series.hpp"
#include "systems.hpp"
#include "transfer.hpp"

struct te_dataset {
    teflow::Dataset data;
};

namespace {

thread_local std::string g_last_error = "no error";

te_status fail(te_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

/* Runs `fn`, translating C++ exceptions into status codes. */
template <typename Fn>
te_status guarded(Fn&& fn) {
    try {
        fn();
        return TE_OK;
    } catch (const teflow::InsufficientData& e) {
        return fail(TE_ERROR_INSUFFICIENT_DATA, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TE_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(TE_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const teflow::IoError& e) {
        return fail(TE_ERROR_IO, e.what());
    } catch (const std::runtime_error& e) {
        return fail(TE_ERROR_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TE_ERROR_UNKNOWN, "out of memory");
    } catch (const std::exception& e) {
        return fail(TE_ERROR_UNKNOWN, e.what());
    }
}

te_status require(bool ok, const char* message) {
    return ok ? TE_OK : fail(TE_ERROR_INVALID_ARGUMENT, message);
}

teflow::TeParams to_params(const te_options& o) {
    teflow::TeParams p;
    p.k = o.k;
    p.order = o.order;
    p.window = o.exclusion_window;
    p.m = o.first_order_m;
    switch (o.r_mode) {
        case TE_R_MATCHED: p.policy = {teflow::RMode::matched, o.r_coeff}; break;
        case TE_R_INVERSE: p.policy = {teflow::RMode::inverse, o.r_coeff}; break;
        case TE_R_FIXED: p.policy = {teflow::RMode::fixed, o.r_coeff}; break;
        default:
            throw std::invalid_argument("unknown r mode");
    }
    return p;
}

teflow::StateSeries embed_channel(const teflow::Dataset& ds, const char* name,
                                  const te_options& o) {
    const teflow::TimeSeries& ch = ds.channel(std::string(name));
    if (o.zscore) {
        return teflow::delay_embed(teflow::zscored(ch), o.d, o.tau);
    }
    return teflow::delay_embed(ch, o.d, o.tau);
}

}  // namespace

extern "C" {

const char* te_last_error(void) { return g_last_error.c_str(); }

const char* te_version(void) { return "0.1.0"; }

te_status te_dataset_create(const char* const* names, const double* const* columns,
                            size_t n_channels, size_t length, te_dataset** out) {
    if (te_status s = require(names && columns && out && n_channels > 0,
                              "te_dataset_create: null argument or no channels"))
        return s;
    return guarded([&] {
        auto ds = std::make_unique<te_dataset>();
        for (size_t c = 0; c < n_channels; ++c) {
            if (!names[c] || (!columns[c] && length > 0)) {
                throw std::invalid_argument("te_dataset_create: null name or "
                                            "column at index " + std::to_string(c));
            }
            teflow::TimeSeries series{names[c], {}, 1.0};
            series.values.assign(columns[c], columns[c] + length);
            ds->data.add_channel(std::move(series));
        }
        *out = ds.release();
    });
}

te_status te_dataset_load_csv(const char* path, char delimiter, te_dataset** out) {
    if (te_status s = require(path && out, "te_dataset_load_csv: null argument"))
        return s;
    return guarded([&] {
        auto ds = std::make_unique<te_dataset>();
        ds->data = teflow::load_csv(path, delimiter ? delimiter : ',');
        *out = ds.release();
    });
}

te_status te_dataset_save_csv(const te_dataset* dataset, const char* path,
                              char delimiter) {
    if (te_status s = require(dataset && path, "te_dataset_save_csv: null argument"))
        return s;
    return guarded([&] {
        teflow::save_csv(dataset->data, path, delimiter ? delimiter : ',');
    });
}

void te_dataset_free(te_dataset* dataset) { delete dataset; }

size_t te_dataset_channel_count(const te_dataset* dataset) {
    return dataset ? dataset->data.channel_count() : 0;
}

size_t te_dataset_length(const te_dataset* dataset) {
    return dataset ? dataset->data.length() : 0;
}

const char* te_dataset_channel_name(const te_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->data.channel_count()) return nullptr;
    return dataset->data.channel(index).name.c_str();
}

const double* te_dataset_channel_values(const te_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->data.channel_count()) return nullptr;
    return dataset->data.channel(index).values.data();
}

te_status te_simulate_tent(double a, double x0, size_t n, size_t transient,
                           te_dataset** out) {
    if (te_status s = require(out != nullptr, "te_simulate_tent: null output"))
        return s;
    return guarded([&] {
        auto ds = std::make_unique<te_dataset>();
        ds->data = teflow::iterate_tent({a}, x0, n, transient);
        *out = ds.release();
    });
}

te_status te_simulate_coupled(double a, double eps, double mu, double x0,
                              double y0, size_t n, size_t transient,
                              te_dataset** out) {
    if (te_status s = require(out != nullptr, "te_simulate_coupled: null output"))
        return s;
    return guarded([&] {
        auto ds = std::make_unique<te_dataset>();
        ds->data = teflow::iterate_coupled({eps, mu, a}, x0, y0, n, transient);
        *out = ds.release();
    });
}

void te_chua_params_init(te_chua_params* params) {
    if (!params) return;
    const teflow::ChuaParams defaults;
    params->alpha = defaults.alpha;
    params->beta = defaults.beta;
    params->m0 = defaults.m0;
    params->m1 = defaults.m1;
    params->dt = defaults.dt;
    params->stride = defaults.stride;
}

te_status te_simulate_chua(const te_chua_params* params, double x0, double y0,
                           double z0, size_t n, size_t transient,
                           te_dataset** out) {
    if (te_status s = require(params && out, "te_simulate_chua: null argument"))
        return s;
    return guarded([&] {
        teflow::ChuaParams p;
        p.alpha = params->alpha;
        p.beta = params->beta;
        p.m0 = params->m0;
        p.m1 = params->m1;
        p.dt = params->dt;
        p.stride = params->stride;
        auto ds = std::make_unique<te_dataset>();
        ds->data = teflow::integrate_rk4(p, {x0, y0, z0}, n, transient);
        *out = ds.release();
    });
}

te_status te_sync_error(const te_dataset* dataset, double* out) {
    if (te_status s = require(dataset && out, "te_sync_error: null argument"))
        return s;
    return guarded([&] { *out = teflow::sync_error(dataset->data); });
}

void te_options_init(te_options* options) {
    if (!options) return;
    options->d = 1;
    options->tau = 1;
    options->k = 1;
    options->order = 0;
    options->r_mode = TE_R_MATCHED;
    options->r_coeff = 1.0;
    options->exclusion_window = 0;
    options->first_order_m = 0;
    options->zscore = 0;
    options->threads = 1;
}

te_status te_estimate_pair(const te_dataset* dataset, const char* source,
                           const char* target, const te_options* options,
                           te_pair_result* out) {
    if (te_status s = require(dataset && source && target && options && out,
                              "te_estimate_pair: null argument"))
        return s;
    return guarded([&] {
        const teflow::TeParams params = to_params(*options);
        const teflow::StateSeries src = embed_channel(dataset->data, source, *options);
        const teflow::StateSeries tgt = embed_channel(dataset->data, target, *options);
        const teflow::TeEstimate fwd = teflow::transfer_entropy(src, tgt, params);
        const teflow::TeEstimate bwd = teflow::transfer_entropy(tgt, src, params);

        te_pair_result r{};
        r.te_forward = fwd.value_bits;
        r.te_backward = bwd.value_bits;
        r.directionality = std::nan("");
        if (fwd.value_bits + bwd.value_bits != 0.0) {
            r.directionality =
                teflow::directionality_index(fwd.value_bits, bwd.value_bits);
        }
        r.r_joint_forward = fwd.r_joint;
        r.r_self_forward = fwd.r_self;
        r.r_joint_backward = bwd.r_joint;
        r.r_self_backward = bwd.r_self;
        r.n_samples = fwd.n_samples;
        r.clamped_forward = fwd.clamped;
        r.clamped_backward = bwd.clamped;
        *out = r;
    });
}

te_status te_estimate_logs(const te_dataset* dataset, const char* source,
                           const char* target, const te_options* options,
                           double* logs, size_t capacity, size_t* n_samples) {
    if (te_status s = require(dataset && source && target && options && logs &&
                                  n_samples,
                              "te_estimate_logs: null argument"))
        return s;
    return guarded([&] {
        teflow::TeParams params = to_params(*options);
        params.keep_logs = true;
        const teflow::StateSeries src = embed_channel(dataset->data, source, *options);
        const teflow::StateSeries tgt = embed_channel(dataset->data, target, *options);
        const teflow::TeEstimate est = teflow::transfer_entropy(src, tgt, params);
        *n_samples = est.per_sample_logs.size();
        const size_t n = std::min(capacity, est.per_sample_logs.size());
        std::memcpy(logs, est.per_sample_logs.data(), n * sizeof(double));
    });
}

te_status te_net_flow(const te_dataset* dataset, const te_options* options,
                      double* matrix, double* net) {
    if (te_status s = require(dataset && options && matrix && net,
                              "te_net_flow: null argument"))
        return s;
    return guarded([&] {
        const teflow::Dataset* input = &dataset->data;
        teflow::Dataset standardized;
        if (options->zscore) {
            for (const auto& ch : dataset->data.channels()) {
                standardized.add_channel(teflow::zscored(ch));
            }
            input = &standardized;
        }
        const teflow::FlowResult flow =
            teflow::te_matrix(*input, options->d, options->tau,
                              to_params(*options),
                              options->threads ? options->threads : 1);
        const std::size_t p = flow.channel_count();
        std::memcpy(matrix, flow.te_matrix.data(), p * p * sizeof(double));
        std::memcpy(net, flow.net_flow.data(), p * sizeof(double));
    });
}

te_status te_surrogate_baseline(const te_dataset* dataset, const char* source,
                                const char* target, const te_options* options,
                                size_t n_surrogates, uint64_t seed,
                                te_surrogate_summary* out) {
    if (te_status s = require(dataset && source && target && options && out,
                              "te_surrogate_baseline: null argument"))
        return s;
    return guarded([&] {
        const teflow::StateSeries src = embed_channel(dataset->data, source, *options);
        const teflow::StateSeries tgt = embed_channel(dataset->data, target, *options);
        const teflow::SurrogateSummary summary = teflow::surrogate_baseline(
            src, tgt, n_surrogates, seed, to_params(*options));
        out->original = summary.original;
        out->mean = summary.mean;
        out->stddev = summary.stddev;
        out->n_surrogates = summary.n_surrogates;
    });
}

te_status te_directionality_index(double i_ab, double i_ba, double* out) {
    if (te_status s = require(out != nullptr, "te_directionality_index: null output"))
        return s;
    return guarded([&] { *out = teflow::directionality_index(i_ab, i_ba); });
}

te_status te_binned_oracle(const double* source, const double* target,
                           size_t length, size_t n_bins, double* out) {
    if (te_status s = require(source && target && out,
                              "te_binned_oracle: null argument"))
        return s;
    return guarded([&] {
        teflow::oracle::BinningConfig config;
        config.n_bins = n_bins;
        *out = teflow::oracle::te_binned({source, length}, {target, length}, config);
    });
}

}  // extern "C"
