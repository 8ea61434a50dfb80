#include "neighbors.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teflow {

namespace {
constexpr std::size_t kLeafSize = 16;
constexpr std::size_t kMaxTreeDim = 16;
}  // namespace

struct NeighborIndex::Search {
    const double* query;
    std::size_t query_index;
    std::size_t window;
    std::size_t k;
    std::vector<Candidate> heap;  // max-heap, top() is the current worst

    bool admissible(std::size_t j) const {
        const std::size_t lo = query_index >= window ? query_index - window : 0;
        return j < lo || j > query_index + window;
    }

    bool full() const { return heap.size() == k; }
    double worst() const { return heap.front().dist2; }

    void offer(double dist2, std::size_t index) {
        Candidate cand{dist2, index};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end());
        }
    }
};

NeighborIndex::NeighborIndex(const StateSeries& states)
    : points_(states.states.data()), count_(states.size()), dim_(states.dim) {
    if (count_ < 2) {
        throw InsufficientData("neighbor index needs at least 2 states, got " +
                                    std::to_string(count_));
    }
    order_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) order_[i] = i;
    if (dim_ <= kMaxTreeDim) {
        nodes_.reserve(2 * count_ / kLeafSize + 2);
        build_node(0, count_, 0);
    }
}

double NeighborIndex::dist2_to(std::size_t point, const double* query) const {
    const double* p = points_ + point * dim_;
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double diff = p[j] - query[j];
        acc += diff * diff;
    }
    return acc;
}

std::size_t NeighborIndex::build_node(std::size_t begin, std::size_t end,
                                      std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
        nodes_[id].axis = -1;
        nodes_[id].left = begin;
        nodes_[id].right = end;
        return id;
    }

    const int axis = static_cast<int>(depth % dim_);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](std::size_t a, std::size_t b) {
                         const double va = points_[a * dim_ + axis];
                         const double vb = points_[b * dim_ + axis];
                         return va < vb || (va == vb && a < b);
                     });

    nodes_[id].axis = axis;
    nodes_[id].split = points_[order_[mid] * dim_ + axis];
    const std::size_t left = build_node(begin, mid, depth + 1);
    const std::size_t right = build_node(mid, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void NeighborIndex::search_node(std::size_t node, Search& search) const {
    const Node& n = nodes_[node];
    if (n.axis < 0) {
        for (std::size_t slot = n.left; slot < n.right; ++slot) {
            const std::size_t j = order_[slot];
            if (!search.admissible(j)) continue;
            search.offer(dist2_to(j, search.query), j);
        }
        return;
    }

    const double delta = search.query[n.axis] - n.split;
    const std::size_t near = delta < 0.0 ? n.left : n.right;
    const std::size_t far = delta < 0.0 ? n.right : n.left;
    search_node(near, search);
    // Equal plane distances may still hide a lower-index tie, so only a
    // strictly larger bound prunes.
    if (!search.full() || delta * delta <= search.worst()) {
        search_node(far, search);
    }
}

NeighborSet NeighborIndex::query(std::size_t query_index, std::size_t k,
                                 std::size_t exclusion_window) const {
    if (query_index >= count_) {
        throw std::out_of_range("query index " + std::to_string(query_index) +
                                " out of range (have " + std::to_string(count_) +
                                " states)");
    }
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    exclusion_window = std::min(exclusion_window, count_);  // no index wraparound
    const std::size_t lo =
        query_index >= exclusion_window ? query_index - exclusion_window : 0;
    const std::size_t hi = std::min(count_ - 1, query_index + exclusion_window);
    const std::size_t admissible = count_ - (hi - lo + 1);
    if (k > admissible) {
        throw InsufficientData(
            "k=" + std::to_string(k) + " exceeds the " + std::to_string(admissible) +
            " admissible candidates at query index " + std::to_string(query_index) +
            " (exclusion window " + std::to_string(exclusion_window) + ")");
    }

    Search search{points_ + query_index * dim_, query_index, exclusion_window, k, {}};
    search.heap.reserve(k);
    if (!nodes_.empty()) {
        search_node(0, search);
    } else {
        for (std::size_t j = 0; j < count_; ++j) {
            if (!search.admissible(j)) continue;
            search.offer(dist2_to(j, search.query), j);
        }
    }

    std::sort(search.heap.begin(), search.heap.end());
    NeighborSet out;
    out.query_index = query_index;
    out.indices.reserve(k);
    out.distances.reserve(k);
    for (const Candidate& c : search.heap) {
        out.indices.push_back(c.index);
        out.distances.push_back(std::sqrt(c.dist2));
    }
    return out;
}

}  // namespace teflow
