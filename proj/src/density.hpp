#pragma once

#include <cstddef>

#include "localmodel.hpp"
#include "neighbors.hpp"
#include "series.hpp"

namespace teflow {

/// Logistic conditional model: CCDF S(r*(center - y)), density its
/// magnitude of derivative in y. center is the local-model prediction,
/// 1/r the scale. The density peaks at y = center with value r/4.
struct CpdModel {
    double center = 0.0;
    double r = 1.0;
};

enum class RMode {
    matched,  // r = pi / (sigma * sqrt(3)): logistic std equals sigma
    inverse,  // r = c / sigma
    fixed,    // r = c
};

/// How the sigmoid steepness is derived from model residuals.
struct RPolicy {
    RMode mode = RMode::matched;
    double c = 1.0;
};

/// S(r*(center - y)) with S(u) = 1/(1 + e^{-u}); in [0, 1].
double ccdf(const CpdModel& model, double y);

/// Logistic density r*e^{-u}/(1+e^{-u})^2 with u = r*(center - y).
double cpd(const CpdModel& model, double y);

/// log of cpd(), computed without under/overflow for any |u|.
double log_cpd(const CpdModel& model, double y);

/// Maps a (floored) residual sigma to the sigmoid steepness r.
/// Throws when the result would not be positive and finite.
double resolve_r(const RPolicy& policy, double sigma);

/// Fits the local model at query_index and evaluates the logistic density at
/// that state's true successor.
double conditional_density_at_sample(const StateSeries& states,
                                     const NeighborIndex& index,
                                     std::size_t query_index, double r,
                                     int order, std::size_t m = 0,
                                     std::size_t window = 0);

/// k-NN marginal density estimate k/(N * ||x - x_vk||), exactly as stated
/// (no volume normalization). Throws when the k-th distance is zero.
double marginal_knn(const StateSeries& states, const NeighborIndex& index,
                    std::size_t query_index, std::size_t k,
                    std::size_t window = 0);

}  // namespace teflow
