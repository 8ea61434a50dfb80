#pragma once

#include <array>
#include <cstddef>

#include "series.hpp"

namespace teflow {

/// Skew tent map apex parameter, 0 < a < 1.
struct TentParams {
    double a = 0.65;
};

/// Bidirectionally coupled tent-map pair: eps couples y into x, mu couples
/// x into y.
struct CouplingParams {
    double eps = 0.0;
    double mu = 0.0;
    double a = 0.5;
};

/// Dimensionless double-scroll Chua system.
struct ChuaParams {
    double alpha = 9.0;
    double beta = 100.0 / 7.0;
    double m0 = -8.0 / 7.0;
    double m1 = -5.0 / 7.0;
    double dt = 0.01;
    std::size_t stride = 1;  // record every stride-th integration step
};

/// x/a on [0, a], (1-x)/(1-a) on (a, 1]. Throws when x is outside [0, 1].
double tent_step(const TentParams& params, double x);

/// One quantized map iterate: tent_step followed by rounding onto the fixed
/// odd lattice the generators run on (see iterate_coupled).
double tent_iterate(const TentParams& params, double x);

/// Solo tent-map orbit (single channel "x"), transient discarded.
Dataset iterate_tent(const TentParams& params, double x0, std::size_t n,
                     std::size_t transient);

/// Coupled orbit per x' = f(x + eps(y-x)), y' = f(y + mu(x-y)); returns
/// channels "x", "y" after the transient. Iterates are kept on an odd 5^14
/// grid: dyadic apex values (a = 1/2 in particular) otherwise drain one
/// mantissa bit per step and every orbit hits the absorbing point 0 within
/// ~55 iterations. The grid spacing (~1.6e-10) is far below anything the
/// estimators resolve.
Dataset iterate_coupled(const CouplingParams& params, double x0, double y0,
                        std::size_t n, std::size_t transient);

/// Chua right-hand side (alpha(y - x - g(x)), x - y + z, -beta y) with the
/// piecewise-linear diode g(x) = m1 x + (m0 - m1)(|x+1| - |x-1|)/2.
std::array<double, 3> chua_rhs(const ChuaParams& params,
                               const std::array<double, 3>& state);

/// One classical RK4 step of an arbitrary autonomous system.
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, const State& state, double dt) {
    State k1 = rhs(state);
    State mid = state;
    for (std::size_t i = 0; i < state.size(); ++i) mid[i] = state[i] + 0.5 * dt * k1[i];
    State k2 = rhs(mid);
    for (std::size_t i = 0; i < state.size(); ++i) mid[i] = state[i] + 0.5 * dt * k2[i];
    State k3 = rhs(mid);
    for (std::size_t i = 0; i < state.size(); ++i) mid[i] = state[i] + dt * k3[i];
    State k4 = rhs(mid);
    State out = state;
    for (std::size_t i = 0; i < state.size(); ++i) {
        out[i] = state[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

/// RK4-integrated Chua trajectory, channels "v1", "v2", "il"; discards
/// `transient` steps, then records every stride-th state. Throws if the
/// trajectory diverges.
Dataset integrate_rk4(const ChuaParams& params, std::array<double, 3> state0,
                      std::size_t n_samples, std::size_t transient);

/// |last x - last y| of a two-channel dataset.
double sync_error(const Dataset& dataset);

}  // namespace teflow
