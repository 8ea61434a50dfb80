#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "localmodel.hpp"
#include "systems.hpp"

using namespace teflow;

namespace {

StateSeries make_series(std::vector<double> states, std::vector<double> successors) {
    StateSeries s;
    s.dim = 1;
    s.tau = 1;
    s.states = std::move(states);
    s.successors = std::move(successors);
    s.source_indices.resize(s.successors.size());
    for (std::size_t i = 0; i < s.source_indices.size(); ++i) s.source_indices[i] = i;
    return s;
}

StateSeries tent_embedded(double a, double x0, std::size_t n) {
    const Dataset ds = iterate_tent({a}, x0, n, 1000);
    return delay_embed(ds.channel(std::size_t{0}), 1, 1);
}

double mean_abs_zero_order_error(const StateSeries& s) {
    const NeighborIndex index(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += std::fabs(s.successors[i] -
                         predict_zero_order(s, index, i).predicted);
    }
    return acc / static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("zero order returns the nearest neighbor's successor") {
    const StateSeries s = make_series({0.1, 0.4, 0.2}, {0.4, 0.2, 0.3});
    const NeighborIndex index(s);
    const LocalPrediction p = predict_zero_order(s, index, 2);
    CHECK(p.neighbor_used == 0);
    CHECK(p.predicted == 0.4);
}

TEST_CASE("zero order at a duplicated state picks the lower index") {
    const StateSeries s = make_series({0.3, 0.8, 0.3, 0.5}, {1.0, 2.0, 3.0, 4.0});
    const NeighborIndex index(s);
    const LocalPrediction p = predict_zero_order(s, index, 2);
    CHECK(p.neighbor_used == 0);  // distance 0 ties to the earlier duplicate
    CHECK(p.predicted == 1.0);
}

TEST_CASE("zero order matches query_knn k=1 exactly") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(160);
    for (double& v : values) v = dist(rng);
    std::vector<double> succ(values.size());
    for (double& v : succ) v = dist(rng);
    const StateSeries s = make_series(values, succ);
    const NeighborIndex index(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const LocalPrediction p = predict_zero_order(s, index, i);
        const NeighborSet nn = index.query(i, 1);
        CHECK(p.neighbor_used == nn.indices[0]);
        CHECK(p.predicted == s.successors[nn.indices[0]]);
    }
}

TEST_CASE("zero-order error shrinks with more tent-map data") {
    const double err_small = mean_abs_zero_order_error(tent_embedded(0.65, 0.2, 500));
    const double err_large = mean_abs_zero_order_error(tent_embedded(0.65, 0.2, 5000));
    CHECK(err_small < 0.1);  // signal range is [0, 1]
    CHECK(err_large < err_small);
}

TEST_CASE("first order reproduces affine data exactly") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> values(60);
    for (double& v : values) v = dist(rng);
    std::vector<double> succ(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) succ[i] = 2.0 * values[i] + 1.0;
    const StateSeries s = make_series(values, succ);
    const NeighborIndex index(s);
    for (std::size_t m : {std::size_t{2}, std::size_t{4}, std::size_t{10}}) {
        for (std::size_t i = 0; i < s.size(); i += 5) {
            const LocalPrediction p = predict_first_order(s, index, i, m);
            CHECK(std::fabs(p.predicted - s.successors[i]) < 1e-10);
        }
    }
}

TEST_CASE("first order needs at least d+1 neighbors") {
    const StateSeries s = make_series({0.1, 0.2, 0.3, 0.4}, {1, 2, 3, 4});
    const NeighborIndex index(s);
    CHECK_THROWS_AS(predict_first_order(s, index, 0, 1), std::invalid_argument);
}

TEST_CASE("rank-deficient neighborhoods fall back to zero order") {
    // Duplicated coordinates make the design matrix singular.
    StateSeries s;
    s.dim = 2;
    s.tau = 1;
    const std::vector<double> base{0.1, 0.7, 0.3, 0.9, 0.5, 0.2, 0.8, 0.4};
    for (double v : base) {
        s.states.push_back(v);
        s.states.push_back(v);
    }
    s.successors = {1, 2, 3, 4, 5, 6, 7, 8};
    s.source_indices = {0, 1, 2, 3, 4, 5, 6, 7};
    const NeighborIndex index(s);
    const LocalPrediction first = predict_first_order(s, index, 0, 4);
    const LocalPrediction zero = predict_zero_order(s, index, 0);
    CHECK(first.predicted == zero.predicted);
    CHECK(first.neighbor_used == zero.neighbor_used);
}

TEST_CASE("first order beats zero order away from the tent kink") {
    const StateSeries s = tent_embedded(0.65, 0.2, 2000);
    const NeighborIndex index(s);
    std::vector<double> e0, e1;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::fabs(s.state(i)[0] - 0.65) < 0.05) continue;  // skip the kink
        e0.push_back(s.successors[i] - predict_zero_order(s, index, i).predicted);
        e1.push_back(s.successors[i] - predict_first_order(s, index, i, 4).predicted);
    }
    auto pop_std = [](const std::vector<double>& e) {
        double mean = 0.0;
        for (double v : e) mean += v;
        mean /= static_cast<double>(e.size());
        double ss = 0.0;
        for (double v : e) ss += (v - mean) * (v - mean);
        return std::sqrt(ss / static_cast<double>(e.size()));
    };
    CHECK(pop_std(e1) <= pop_std(e0));
}

TEST_CASE("residual sigma is zero on a perfectly predictable orbit") {
    // Period-2 orbit: every state has an exact twin with the same successor.
    std::vector<double> values, succ;
    for (int i = 0; i < 16; ++i) {
        values.push_back(i % 2 == 0 ? 0.0 : 1.0);
        succ.push_back(i % 2 == 0 ? 1.0 : 0.0);
    }
    const StateSeries s = make_series(values, succ);
    const NeighborIndex index(s);
    const ResidualStats stats = residual_sigma(s, index, 0);
    CHECK(stats.sigma == 0.0);
    CHECK(stats.count == s.size());
}

TEST_CASE("residual sigma agrees with a brute-force re-implementation") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(1000);
    for (double& v : values) v = dist(rng);
    std::vector<double> succ(values.size());
    for (double& v : succ) v = dist(rng);
    const StateSeries s = make_series(values, succ);
    const NeighborIndex index(s);

    // Reference: direct scan for the nearest state, then the population std.
    std::vector<double> errors;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double best = 1e300;
        std::size_t best_idx = 0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j == i) continue;
            const double d = std::fabs(s.states[j] - s.states[i]);
            if (d < best || (d == best && j < best_idx)) {
                best = d;
                best_idx = j;
            }
        }
        errors.push_back(s.successors[i] - s.successors[best_idx]);
    }
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    const double reference = std::sqrt(ss / static_cast<double>(errors.size()));

    const ResidualStats stats = residual_sigma(s, index, 0);
    CHECK(stats.count == s.size());
    CHECK(stats.sigma == doctest::Approx(reference).epsilon(0.2));
}

TEST_CASE("residual sigma vanishes for first order on linear data") {
    std::vector<double> values(40), succ(40);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = 0.05 * static_cast<double>(i);
        succ[i] = -3.0 * values[i] + 0.7;
    }
    const StateSeries s = make_series(values, succ);
    const NeighborIndex index(s);
    const ResidualStats stats = residual_sigma(s, index, 1, 4);
    CHECK(stats.sigma < 1e-10);
}

TEST_CASE("residual sigma ignores name and dt metadata") {
    TimeSeries a{"first", {0.3, 0.9, 0.1, 0.6, 0.8, 0.2, 0.7, 0.4, 0.5, 0.95}, 1.0};
    TimeSeries b{"second", a.values, 0.005};
    const StateSeries sa = delay_embed(a, 1, 1);
    const StateSeries sb = delay_embed(b, 1, 1);
    const ResidualStats ra = residual_sigma(sa, NeighborIndex(sa), 0);
    const ResidualStats rb = residual_sigma(sb, NeighborIndex(sb), 0);
    CHECK(ra.sigma == rb.sigma);
}

TEST_CASE("sigma floor keeps r finite without inflating real sigmas") {
    CHECK(apply_sigma_floor(0.0, 1.0) == 1e-12);
    CHECK(apply_sigma_floor(0.5, 1.0) == 0.5);
    CHECK(apply_sigma_floor(0.0, 0.0) == 0.0);
}
