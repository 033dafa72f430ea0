#include "wsp/partitions.hpp"

#include <algorithm>
#include <limits>

namespace wsp {

std::uint64_t bell_number(int n) {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row) {
            const std::uint64_t prev = next.back();
            next.push_back(prev > kMax - v ? kMax : prev + v);
        }
        row = std::move(next);
    }
    return row.front();
}

std::vector<std::vector<int>> rgs_blocks(std::span<const int> rgs) {
    std::vector<std::vector<int>> blocks;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        const auto b = static_cast<std::size_t>(rgs[i]);
        if (b >= blocks.size()) {
            blocks.resize(b + 1);
        }
        blocks[b].push_back(static_cast<int>(i));
    }
    return blocks;
}

} // namespace wsp
