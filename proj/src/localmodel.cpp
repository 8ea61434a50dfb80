#include "localmodel.hpp"

#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teflow {

namespace {

std::size_t default_m(std::size_t dim) { return 2 * (dim + 1); }

}  // namespace

LocalPrediction predict_zero_order(const StateSeries& states,
                                   const NeighborIndex& index,
                                   std::size_t query_index, std::size_t window) {
    NeighborSet nn = index.query(query_index, 1, window);
    return {states.successors[nn.indices[0]], nn.indices[0]};
}

LocalPrediction predict_first_order(const StateSeries& states,
                                    const NeighborIndex& index,
                                    std::size_t query_index, std::size_t m,
                                    std::size_t window) {
    const std::size_t d = states.dim;
    if (m < d + 1) {
        throw InsufficientData("first-order fit needs m >= d+1 = " +
                                    std::to_string(d + 1) + " neighbors, got m=" +
                                    std::to_string(m));
    }
    NeighborSet nn = index.query(query_index, m, window);

    Eigen::MatrixXd design(m, d + 1);
    Eigen::VectorXd rhs(m);
    for (std::size_t row = 0; row < m; ++row) {
        const auto state = states.state(nn.indices[row]);
        design(row, 0) = 1.0;
        for (std::size_t j = 0; j < d; ++j) design(row, j + 1) = state[j];
        rhs(row) = states.successors[nn.indices[row]];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(d + 1)) {
        // Degenerate neighborhood (e.g. duplicated coordinates): zero order.
        return {states.successors[nn.indices[0]], nn.indices[0]};
    }

    const Eigen::VectorXd coeff = qr.solve(rhs);
    const auto query = states.state(query_index);
    double predicted = coeff(0);
    for (std::size_t j = 0; j < d; ++j) predicted += coeff(j + 1) * query[j];
    return {predicted, nn.indices[0]};
}

LocalPrediction predict_local(const StateSeries& states, const NeighborIndex& index,
                              std::size_t query_index, int order, std::size_t m,
                              std::size_t window) {
    if (order == 0) {
        return predict_zero_order(states, index, query_index, window);
    }
    if (order == 1) {
        return predict_first_order(states, index, query_index,
                                   m > 0 ? m : default_m(states.dim), window);
    }
    throw std::invalid_argument("local model order must be 0 or 1, got " +
                                std::to_string(order));
}

ResidualStats residual_sigma(const StateSeries& states, const NeighborIndex& index,
                             int order, std::size_t m, std::size_t window) {
    if (order == 1 && m > 0 && m < states.dim + 1) {
        // surface the configuration error instead of skipping every state
        throw std::invalid_argument("first-order fit needs m >= d+1 = " +
                                    std::to_string(states.dim + 1) +
                                    " neighbors, got m=" + std::to_string(m));
    }
    const std::size_t n = states.size();
    std::vector<double> errors;
    errors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        try {
            const LocalPrediction p = predict_local(states, index, i, order, m, window);
            errors.push_back(states.successors[i] - p.predicted);
        } catch (const std::invalid_argument&) {
            // not enough admissible neighbors here; skip the state
        }
    }
    if (errors.empty()) {
        throw std::runtime_error("no state admits a local model (k/window too "
                                 "restrictive for " + std::to_string(n) + " states)");
    }

    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    return {std::sqrt(ss / static_cast<double>(errors.size())), errors.size()};
}

double apply_sigma_floor(double sigma, double value_range) {
    return std::max(sigma, 1e-12 * value_range);
}

}  // namespace teflow
