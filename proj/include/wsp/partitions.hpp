#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace wsp {

/// Bell number B(n); saturates at UINT64_MAX.
std::uint64_t bell_number(int n);

/// Visits every set partition of {0, ..., n-1} as a restricted-growth
/// string in lexicographic order. The visitor returns false to stop early.
/// Returns false if the visitor stopped the enumeration.
template <class Visitor>
bool for_each_partition(int n, Visitor&& visit) {
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
    if (n == 0) {
        return visit(std::span<const int>(rgs));
    }
    while (true) {
        if (!visit(std::span<const int>(rgs))) {
            return false;
        }
        int i = n - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++rgs[i];
        const int top = std::max(prefix_max[i - 1], rgs[i]);
        prefix_max[i] = top;
        for (int j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = top;
        }
    }
}

/// Blocks of a restricted-growth string, block b listing its positions.
std::vector<std::vector<int>> rgs_blocks(std::span<const int> rgs);

} // namespace wsp
