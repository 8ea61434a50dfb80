#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "systems.hpp"

using teflow::oracle::BinningConfig;
using teflow::oracle::discretize;
using teflow::oracle::te_binned;

namespace {

std::vector<double> fair_coin(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = static_cast<double>(rng() & 1u);
    return out;
}

std::vector<double> uniform_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

}  // namespace

TEST_CASE("copy map carries exactly the source entropy") {
    // target_{n+1} = source_n with a fair binary source: 1 bit per step.
    const std::size_t n = 10001;
    const std::vector<double> source = fair_coin(n, 123);
    std::vector<double> target(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) target[i] = source[i - 1];

    BinningConfig config;
    config.n_bins = 2;
    CHECK(te_binned(source, target, config) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("self-driven target with an independent source carries nothing") {
    // Target is a deterministic function of its own past; the source is noise.
    const std::size_t n = 5000;
    teflow::Dataset orbit = teflow::iterate_tent({0.65}, 0.3, n, 100);
    const std::vector<double>& target = orbit.channel("x").values;
    const std::vector<double> source = uniform_series(n, 7);
    CHECK(te_binned(source, target, {}) <= 0.05);
}

TEST_CASE("identical series give exactly zero") {
    const std::vector<double> v = uniform_series(3000, 9);
    CHECK(te_binned(v, v, {}) == 0.0);
}

TEST_CASE("the plug-in estimate is never negative") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::vector<double> a = uniform_series(600, seed * 2 + 1);
        const std::vector<double> b = uniform_series(600, seed * 2 + 2);
        for (std::size_t bins : {std::size_t{2}, std::size_t{8}, std::size_t{16}}) {
            BinningConfig config;
            config.n_bins = bins;
            CHECK(te_binned(a, b, config) >= -1e-12);
        }
    }
}

TEST_CASE("histogram marginals are consistent") {
    const std::vector<double> v = uniform_series(4000, 21);
    const std::vector<std::size_t> bins = discretize(v, {});
    std::vector<std::size_t> counts(8, 0);
    for (std::size_t b : bins) {
        REQUIRE(b < 8);
        ++counts[b];
    }
    double total = 0.0;
    for (std::size_t c : counts) total += static_cast<double>(c) / v.size();
    CHECK(std::fabs(total - 1.0) <= 1e-12);
}

TEST_CASE("data-range binning is invariant under affine rescaling") {
    const std::vector<double> a = uniform_series(2500, 33);
    const std::vector<double> b = uniform_series(2500, 34);
    std::vector<double> a2(a.size()), b2(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a2[i] = 2.5 * a[i] - 1.0;
        b2[i] = 400.0 * b[i] + 3.0;
    }
    CHECK(std::fabs(te_binned(a, b, {}) - te_binned(a2, b2, {})) <= 1e-12);
}

TEST_CASE("right-closed last bin keeps the maximum in range") {
    const std::vector<double> v{0.0, 0.25, 0.5, 0.75, 1.0};
    BinningConfig config;
    config.n_bins = 4;
    const std::vector<std::size_t> bins = discretize(v, config);
    CHECK(bins == std::vector<std::size_t>{0, 1, 2, 3, 3});
}

TEST_CASE("fixed-range policy rejects out-of-range samples") {
    BinningConfig config;
    config.use_data_range = false;
    config.lo = 0.0;
    config.hi = 1.0;
    CHECK_THROWS_AS(discretize(std::vector<double>{0.5, 1.5}, config),
                    std::invalid_argument);
}

TEST_CASE("degenerate and invalid inputs are rejected") {
    const std::vector<double> constant(100, 3.3);
    const std::vector<double> ok = uniform_series(100, 5);
    CHECK_THROWS_WITH_AS(te_binned(constant, ok, {}),
                         doctest::Contains("degenerate"), std::invalid_argument);

    const std::vector<double> shorter = uniform_series(99, 6);
    CHECK_THROWS_AS(te_binned(shorter, ok, {}), std::invalid_argument);

    BinningConfig config;
    config.n_bins = 1;
    CHECK_THROWS_AS(te_binned(ok, ok, config), std::invalid_argument);
    config.n_bins = 100;
    CHECK_THROWS_AS(te_binned(ok, ok, config), std::invalid_argument);

    const std::vector<double> tiny = uniform_series(10, 8);
    CHECK_THROWS_AS(te_binned(tiny, tiny, {}), std::invalid_argument);
}
