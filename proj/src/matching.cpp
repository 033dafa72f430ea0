#include "wsp/matching.hpp"

#include <algorithm>

namespace wsp {

namespace {

bool augment(int left, const std::vector<std::vector<int>>& adj, Matching& m, std::vector<char>& visited) {
    for (int right : adj[static_cast<std::size_t>(left)]) {
        if (visited[static_cast<std::size_t>(right)]) {
            continue;
        }
        visited[static_cast<std::size_t>(right)] = 1;
        const int owner = m.right_to_left[static_cast<std::size_t>(right)];
        if (owner == Matching::kFree || augment(owner, adj, m, visited)) {
            m.left_to_right[static_cast<std::size_t>(left)] = right;
            m.right_to_left[static_cast<std::size_t>(right)] = left;
            return true;
        }
    }
    return false;
}

} // namespace

Matching max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int num_right) {
    Matching m;
    m.left_to_right.assign(adjacency.size(), Matching::kFree);
    m.right_to_left.assign(static_cast<std::size_t>(num_right), Matching::kFree);
    std::vector<char> visited(static_cast<std::size_t>(num_right));
    for (std::size_t left = 0; left < adjacency.size(); ++left) {
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(static_cast<int>(left), adjacency, m, visited)) {
            ++m.size;
        }
    }
    return m;
}

std::vector<int> hall_violator(const std::vector<std::vector<int>>& adjacency, const Matching& m) {
    std::vector<char> reached(adjacency.size(), 0);
    std::vector<int> stack;
    for (std::size_t left = 0; left < adjacency.size(); ++left) {
        if (m.left_to_right[left] == Matching::kFree) {
            reached[left] = 1;
            stack.push_back(static_cast<int>(left));
        }
    }
    while (!stack.empty()) {
        const int left = stack.back();
        stack.pop_back();
        for (int right : adjacency[static_cast<std::size_t>(left)]) {
            const int owner = m.right_to_left[static_cast<std::size_t>(right)];
            if (owner != Matching::kFree && !reached[static_cast<std::size_t>(owner)]) {
                reached[static_cast<std::size_t>(owner)] = 1;
                stack.push_back(owner);
            }
        }
    }
    std::vector<int> out;
    for (std::size_t left = 0; left < adjacency.size(); ++left) {
        if (reached[left]) {
            out.push_back(static_cast<int>(left));
        }
    }
    return out;
}

} // namespace wsp
