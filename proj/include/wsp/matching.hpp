#pragma once

#include <vector>

namespace wsp {

/// Maximum bipartite matching between left vertices and right vertices
/// `0 .. num_right-1`, by augmenting paths. Left vertices are processed in
/// index order and try their neighbours in list order, so the result is
/// deterministic.
struct Matching {
    static constexpr int kFree = -1;

    std::vector<int> left_to_right;
    std::vector<int> right_to_left;
    int size = 0;

    bool perfect() const { return size == static_cast<int>(left_to_right.size()); }
};

Matching max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int num_right);

/// Left vertices reachable by alternating paths from the unmatched left
/// vertices of a maximum matching. Their neighbourhood is strictly smaller
/// than the set itself whenever the matching is not perfect (Hall).
std::vector<int> hall_violator(const std::vector<std::vector<int>>& adjacency, const Matching& m);

} // namespace wsp
