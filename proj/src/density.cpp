#include "density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace teflow {

double ccdf(const CpdModel& model, double y) {
    const double u = model.r * (model.center - y);
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double cpd(const CpdModel& model, double y) {
    // Symmetric in u, so evaluate at -|u| where exp cannot overflow.
    const double u = std::fabs(model.r * (model.center - y));
    const double e = std::exp(-u);
    const double denom = 1.0 + e;
    return model.r * e / (denom * denom);
}

double log_cpd(const CpdModel& model, double y) {
    const double u = std::fabs(model.r * (model.center - y));
    return std::log(model.r) - u - 2.0 * std::log1p(std::exp(-u));
}

double resolve_r(const RPolicy& policy, double sigma) {
    double r = 0.0;
    switch (policy.mode) {
        case RMode::matched:
            r = std::numbers::pi / (sigma * std::sqrt(3.0));
            break;
        case RMode::inverse:
            r = policy.c / sigma;
            break;
        case RMode::fixed:
            r = policy.c;
            break;
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::runtime_error("r policy produced a non-positive or non-finite "
                                 "steepness (sigma=" + std::to_string(sigma) +
                                 "); is the successor channel constant?");
    }
    return r;
}

double conditional_density_at_sample(const StateSeries& states,
                                     const NeighborIndex& index,
                                     std::size_t query_index, double r, int order,
                                     std::size_t m, std::size_t window) {
    const LocalPrediction p =
        predict_local(states, index, query_index, order, m, window);
    return cpd(CpdModel{p.predicted, r}, states.successors[query_index]);
}

double marginal_knn(const StateSeries& states, const NeighborIndex& index,
                    std::size_t query_index, std::size_t k, std::size_t window) {
    const NeighborSet nn = index.query(query_index, k, window);
    const double dist = nn.distances[k - 1];
    if (dist == 0.0) {
        throw std::runtime_error("k-NN marginal is undefined: state " +
                                 std::to_string(query_index) +
                                 " duplicates state " +
                                 std::to_string(nn.indices[k - 1]) +
                                 " (zero k-th distance)");
    }
    return static_cast<double>(k) /
           (static_cast<double>(index.size()) * dist);
}

}  // namespace teflow
