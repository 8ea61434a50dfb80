#pragma once

#include <cstddef>

#include "neighbors.hpp"
#include "series.hpp"

namespace teflow {

/// Result of a local deterministic predictor at one query state.
struct LocalPrediction {
    double predicted = 0.0;
    std::size_t neighbor_used = 0;  // nearest admissible neighbor
};

/// Standard deviation of leave-self-out prediction errors.
struct ResidualStats {
    double sigma = 0.0;      // population std of (successor - predicted)
    std::size_t count = 0;   // states that were evaluable
};

/// Zero order: the successor of the nearest admissible neighbor.
LocalPrediction predict_zero_order(const StateSeries& states,
                                   const NeighborIndex& index,
                                   std::size_t query_index,
                                   std::size_t window = 0);

/// First order: affine least-squares fit over the m nearest neighbors'
/// (state -> successor) pairs, evaluated at the query state. Requires
/// m >= dim + 1; rank-deficient fits fall back to zero order.
LocalPrediction predict_first_order(const StateSeries& states,
                                    const NeighborIndex& index,
                                    std::size_t query_index, std::size_t m,
                                    std::size_t window = 0);

/// Dispatches on order (0 or 1); m is only consulted for order 1 and
/// defaults to 2*(dim+1) when 0.
LocalPrediction predict_local(const StateSeries& states,
                              const NeighborIndex& index,
                              std::size_t query_index, int order,
                              std::size_t m = 0, std::size_t window = 0);

/// Population std of prediction errors over every evaluable state (the query
/// point is never among its own fit neighbors). Throws when no state is
/// evaluable.
ResidualStats residual_sigma(const StateSeries& states,
                             const NeighborIndex& index, int order,
                             std::size_t m = 0, std::size_t window = 0);

/// max(sigma, 1e-12 * value_range); keeps r finite on perfectly
/// deterministic data without touching the reported raw sigma.
double apply_sigma_floor(double sigma, double value_range);

}  // namespace teflow
