#include "systems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace teflow {

namespace {

constexpr double kOrbitLattice = 6103515625.0;  // 5^14, odd on purpose
constexpr double kEscapeTolerance = 1e-12;

double quantize_unit(double v) {
    return std::nearbyint(v * kOrbitLattice) / kOrbitLattice;
}

void check_tent_params(const TentParams& params) {
    if (!(params.a > 0.0 && params.a < 1.0)) {
        throw std::invalid_argument("tent map needs 0 < a < 1, got a=" +
                                    std::to_string(params.a));
    }
}

// Coupling arguments are convex combinations, so anything beyond [0,1] by
// more than rounding slack is a real escape.
double fold_into_unit(double u, const char* what) {
    if (u < 0.0) {
        if (u < -kEscapeTolerance) {
            throw std::runtime_error(std::string(what) +
                                     " escaped [0,1]: " + std::to_string(u));
        }
        return 0.0;
    }
    if (u > 1.0) {
        if (u > 1.0 + kEscapeTolerance) {
            throw std::runtime_error(std::string(what) +
                                     " escaped [0,1]: " + std::to_string(u));
        }
        return 1.0;
    }
    return u;
}

void check_seed(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " +
                                    std::to_string(v));
    }
}

}  // namespace

double tent_step(const TentParams& params, double x) {
    check_tent_params(params);
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("tent map state must lie in [0,1], got " +
                                    std::to_string(x));
    }
    return x <= params.a ? x / params.a : (1.0 - x) / (1.0 - params.a);
}

double tent_iterate(const TentParams& params, double x) {
    return quantize_unit(tent_step(params, x));
}

Dataset iterate_tent(const TentParams& params, double x0, std::size_t n,
                     std::size_t transient) {
    check_tent_params(params);
    check_seed(x0, "x0");
    if (n == 0) {
        throw std::invalid_argument("need n >= 1 samples");
    }

    double x = quantize_unit(x0);
    TimeSeries xs{"x", {}, 1.0};
    xs.values.reserve(n);
    for (std::size_t i = 0; i < transient + n; ++i) {
        x = tent_iterate(params, x);
        if (i >= transient) xs.values.push_back(x);
    }
    Dataset out;
    out.add_channel(std::move(xs));
    return out;
}

Dataset iterate_coupled(const CouplingParams& params, double x0, double y0,
                        std::size_t n, std::size_t transient) {
    const TentParams tent{params.a};
    check_tent_params(tent);
    if (!(params.eps >= 0.0 && params.eps <= 1.0) ||
        !(params.mu >= 0.0 && params.mu <= 1.0)) {
        throw std::invalid_argument("coupling strengths must lie in [0,1], got eps=" +
                                    std::to_string(params.eps) + ", mu=" +
                                    std::to_string(params.mu));
    }
    check_seed(x0, "x0");
    check_seed(y0, "y0");
    if (n == 0) {
        throw std::invalid_argument("need n >= 1 samples");
    }

    double x = quantize_unit(x0);
    double y = quantize_unit(y0);
    TimeSeries xs{"x", {}, 1.0};
    TimeSeries ys{"y", {}, 1.0};
    xs.values.reserve(n);
    ys.values.reserve(n);
    for (std::size_t i = 0; i < transient + n; ++i) {
        const double u = fold_into_unit(x + params.eps * (y - x), "x coupling argument");
        const double v = fold_into_unit(y + params.mu * (x - y), "y coupling argument");
        x = tent_iterate(tent, u);
        y = tent_iterate(tent, v);
        if (i >= transient) {
            xs.values.push_back(x);
            ys.values.push_back(y);
        }
    }
    Dataset out;
    out.add_channel(std::move(xs));
    out.add_channel(std::move(ys));
    return out;
}

std::array<double, 3> chua_rhs(const ChuaParams& params,
                               const std::array<double, 3>& state) {
    const auto [x, y, z] = state;
    const double g = params.m1 * x +
                     0.5 * (params.m0 - params.m1) *
                         (std::fabs(x + 1.0) - std::fabs(x - 1.0));
    return {params.alpha * (y - x - g), x - y + z, -params.beta * y};
}

Dataset integrate_rk4(const ChuaParams& params, std::array<double, 3> state0,
                      std::size_t n_samples, std::size_t transient) {
    if (!(params.dt > 0.0)) {
        throw std::invalid_argument("integration step dt must be positive");
    }
    if (params.stride == 0) {
        throw std::invalid_argument("stride must be positive");
    }
    if (n_samples == 0) {
        throw std::invalid_argument("need n >= 1 samples");
    }

    auto rhs = [&](const std::array<double, 3>& s) { return chua_rhs(params, s); };
    auto guard = [&](const std::array<double, 3>& s, std::size_t step) {
        for (double c : s) {
            if (!std::isfinite(c) || std::fabs(c) > 1e6) {
                throw std::runtime_error("Chua trajectory diverged at step " +
                                         std::to_string(step));
            }
        }
    };

    std::array<double, 3> s = state0;
    std::size_t step = 0;
    for (std::size_t i = 0; i < transient; ++i, ++step) {
        s = rk4_step(rhs, s, params.dt);
        guard(s, step);
    }

    TimeSeries v1{"v1", {}, params.dt * static_cast<double>(params.stride)};
    TimeSeries v2 = v1;
    TimeSeries il = v1;
    v2.name = "v2";
    il.name = "il";
    v1.values.reserve(n_samples);
    v2.values.reserve(n_samples);
    il.values.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t k = 0; k < params.stride; ++k, ++step) {
            s = rk4_step(rhs, s, params.dt);
            guard(s, step);
        }
        v1.values.push_back(s[0]);
        v2.values.push_back(s[1]);
        il.values.push_back(s[2]);
    }

    Dataset out;
    out.add_channel(std::move(v1));
    out.add_channel(std::move(v2));
    out.add_channel(std::move(il));
    return out;
}

double sync_error(const Dataset& dataset) {
    if (dataset.channel_count() != 2) {
        throw std::invalid_argument("synchronization error needs exactly 2 channels, got " +
                                    std::to_string(dataset.channel_count()));
    }
    const auto& x = dataset.channel(std::size_t{0}).values;
    const auto& y = dataset.channel(std::size_t{1}).values;
    return std::fabs(x.back() - y.back());
}

}  // namespace teflow
