#pragma once

#include <cstddef>
#include <vector>

#include "series.hpp"

namespace teflow {

/// k nearest admissible neighbors of one query state, ascending by distance.
/// Equal distances break toward the lower index, so results are reproducible
/// bit-for-bit and identical between backends.
struct NeighborSet {
    std::size_t query_index = 0;
    std::vector<std::size_t> indices;
    std::vector<double> distances;
};

/// Exact Euclidean k-NN over the rows of a StateSeries. Uses a k-d tree for
/// dim <= 16 and a linear scan otherwise; both return identical results.
/// Immutable after construction; concurrent queries need no locking.
class NeighborIndex {
public:
    /// Requires at least 2 states.
    explicit NeighborIndex(const StateSeries& states);

    /// The k admissible states nearest to state[query_index]. Candidates j
    /// with |j - query_index| <= exclusion_window are excluded (the query
    /// point itself always is). Throws when fewer than k candidates remain.
    NeighborSet query(std::size_t query_index, std::size_t k,
                      std::size_t exclusion_window = 0) const;

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    bool uses_tree() const { return !nodes_.empty(); }

private:
    struct Node {
        double split = 0.0;
        int axis = -1;           // -1 marks a leaf
        std::size_t left = 0;    // child node or first point slot
        std::size_t right = 0;   // child node or one-past-last point slot
    };

    struct Candidate {
        double dist2;
        std::size_t index;
        bool operator<(const Candidate& other) const {
            return dist2 < other.dist2 ||
                   (dist2 == other.dist2 && index < other.index);
        }
    };

    struct Search;

    std::size_t build_node(std::size_t begin, std::size_t end, std::size_t depth);
    void search_node(std::size_t node, Search& search) const;
    double dist2_to(std::size_t point, const double* query) const;

    const double* points_ = nullptr;  // borrowed from the StateSeries
    std::size_t count_ = 0;
    std::size_t dim_ = 0;
    std::vector<std::size_t> order_;  // point ids, permuted by the build
    std::vector<Node> nodes_;         // empty => brute-force backend
};

}  // namespace teflow
