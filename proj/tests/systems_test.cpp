#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "systems.hpp"

using namespace teflow;

TEST_CASE("tent_step evaluates both branches") {
    CHECK(tent_step({0.65}, 0.65) == 1.0);
    CHECK(tent_step({0.65}, 1.0) == 0.0);
    CHECK(tent_step({0.5}, 0.25) == 0.5);
}

TEST_CASE("tent_step validates inputs") {
    CHECK_THROWS_AS(tent_step({0.65}, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(tent_step({0.65}, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(tent_step({1.2}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(tent_step({0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("tent_step maps [0,1] into [0,1] with the apex at a") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const TentParams params{0.65};
    for (int i = 0; i < 2000; ++i) {
        const double y = tent_step(params, dist(rng));
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
    }
    CHECK(tent_step(params, params.a) == 1.0);
}

TEST_CASE("uncoupled iteration bit-matches two solo runs") {
    const std::size_t n = 400;
    const Dataset coupled = iterate_coupled({0.0, 0.0, 0.5}, 0.345678, 0.789012, n, 50);
    const Dataset solo_x = iterate_tent({0.5}, 0.345678, n, 50);
    const Dataset solo_y = iterate_tent({0.5}, 0.789012, n, 50);
    CHECK(coupled.channel("x").values == solo_x.channel("x").values);
    CHECK(coupled.channel("y").values == solo_y.channel("x").values);
}

TEST_CASE("uncoupled orbits do not collapse to the dyadic sink") {
    // a=1/2 is exact in binary arithmetic; the lattice quantization must keep
    // the orbit alive through a long transient.
    const Dataset ds = iterate_tent({0.5}, 0.345678, 500, 1000);
    const auto& v = ds.channel("x").values;
    double lo = 1.0, hi = 0.0, mean = 0.0;
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    CHECK(hi - lo > 0.5);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("symmetric coupling with identical seeds stays synchronized") {
    const Dataset ds = iterate_coupled({0.5, 0.5, 0.5}, 0.3, 0.3, 200, 0);
    CHECK(ds.channel("x").values == ds.channel("y").values);
}

TEST_CASE("strong symmetric coupling synchronizes distinct seeds") {
    const Dataset ds = iterate_coupled({0.45, 0.45, 0.5}, 0.345678, 0.789012, 500, 1000);
    CHECK(sync_error(ds) < 1e-6);
}

TEST_CASE("coupling strengths outside [0,1] are rejected") {
    CHECK_THROWS_AS(iterate_coupled({1.2, 0.0, 0.5}, 0.3, 0.4, 10, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(iterate_coupled({0.0, -0.1, 0.5}, 0.3, 0.4, 10, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(iterate_coupled({0.0, 0.0, 0.5}, 1.5, 0.4, 10, 0),
                    std::invalid_argument);
}

TEST_CASE("chua_rhs fixes the origin and evaluates the diode") {
    const ChuaParams params;
    const std::array<double, 3> zero = chua_rhs(params, {0.0, 0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);

    // At x=1 the diode value is exactly m0, so dx = alpha(-1 - m0) = 9/7.
    const std::array<double, 3> at_one = chua_rhs(params, {1.0, 0.0, 0.0});
    CHECK(at_one[0] == doctest::Approx(9.0 / 7.0).epsilon(1e-12));
    CHECK(at_one[1] == 1.0);
    CHECK(at_one[2] == 0.0);
}

TEST_CASE("rk4 reproduces exponential decay") {
    auto rhs = [](const std::array<double, 1>& s) {
        return std::array<double, 1>{-s[0]};
    };
    std::array<double, 1> s{2.0};
    for (int i = 0; i < 100; ++i) s = rk4_step(rhs, s, 0.01);
    CHECK(std::fabs(s[0] - 2.0 * std::exp(-1.0)) < 1e-8);
}

TEST_CASE("rk4 shows fourth-order convergence") {
    auto rhs = [](const std::array<double, 1>& s) {
        return std::array<double, 1>{-s[0]};
    };
    auto error_at = [&](double dt, int steps) {
        std::array<double, 1> s{1.0};
        for (int i = 0; i < steps; ++i) s = rk4_step(rhs, s, dt);
        return std::fabs(s[0] - std::exp(-dt * steps));
    };
    const double coarse = error_at(0.1, 10);
    const double fine = error_at(0.05, 20);
    const double factor = coarse / fine;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
}

TEST_CASE("integrating from the origin stays at the origin") {
    const Dataset ds = integrate_rk4(ChuaParams{}, {0.0, 0.0, 0.0}, 50, 100);
    for (double v : ds.channel("v1").values) CHECK(v == 0.0);
    for (double v : ds.channel("il").values) CHECK(v == 0.0);
}

TEST_CASE("canonical Chua run is bounded, double-scroll, and non-repeating") {
    const ChuaParams params;  // canonical alpha=9, beta=100/7 set
    const Dataset ds = integrate_rk4(params, {0.1, 0.0, 0.0}, 10000, 10000);
    const auto& v1 = ds.channel("v1").values;
    const auto& v2 = ds.channel("v2").values;
    const auto& il = ds.channel("il").values;

    double max_abs = 0.0;
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        max_abs = std::max({max_abs, std::fabs(v1[i]), std::fabs(v2[i]),
                            std::fabs(il[i])});
        pos = pos || v1[i] > 0.5;
        neg = neg || v1[i] < -0.5;
    }
    CHECK(max_abs < 50.0);
    CHECK(pos);  // visits both scroll lobes
    CHECK(neg);

    // no recurrence of the first recorded state within 1e-6
    double closest = 1e300;
    for (std::size_t i = 1; i < v1.size(); ++i) {
        const double d = std::sqrt((v1[i] - v1[0]) * (v1[i] - v1[0]) +
                                   (v2[i] - v2[0]) * (v2[i] - v2[0]) +
                                   (il[i] - il[0]) * (il[i] - il[0]));
        closest = std::min(closest, d);
    }
    CHECK(closest > 1e-6);
}

TEST_CASE("divergent integration reports an error") {
    ChuaParams params;
    params.dt = 10.0;  // wildly unstable step
    CHECK_THROWS_WITH_AS(integrate_rk4(params, {0.1, 0.0, 0.0}, 100, 1000),
                         doctest::Contains("diverged"), std::runtime_error);
}

TEST_CASE("stride thins the sampling and scales channel dt") {
    ChuaParams fine;
    ChuaParams coarse;
    coarse.stride = 4;
    const Dataset a = integrate_rk4(fine, {0.1, 0.0, 0.0}, 64, 100);
    const Dataset b = integrate_rk4(coarse, {0.1, 0.0, 0.0}, 16, 100);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(b.channel("v1").values[i] == a.channel("v1").values[i * 4 + 3]);
    }
    CHECK(b.channel("v1").dt == doctest::Approx(0.04));
}

TEST_CASE("sync_error basics") {
    Dataset same;
    same.add_channel(TimeSeries{"x", {0.1, 0.7}, 1.0});
    same.add_channel(TimeSeries{"y", {0.9, 0.7}, 1.0});
    CHECK(sync_error(same) == 0.0);

    Dataset apart;
    apart.add_channel(TimeSeries{"x", {0.0, 0.7}, 1.0});
    apart.add_channel(TimeSeries{"y", {0.0, 0.2}, 1.0});
    CHECK(sync_error(apart) == doctest::Approx(0.5));

    Dataset three;
    three.add_channel(TimeSeries{"a", {1, 2}, 1.0});
    three.add_channel(TimeSeries{"b", {1, 2}, 1.0});
    three.add_channel(TimeSeries{"c", {1, 2}, 1.0});
    CHECK_THROWS_AS(sync_error(three), std::invalid_argument);
}
