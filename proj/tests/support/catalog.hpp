#pragma once

#include <vector>

#include "wsp/core.hpp"

namespace catalog {

inline std::vector<wsp::TaskId> range(int from, int to) {
    std::vector<wsp::TaskId> v;
    for (int i = from; i < to; ++i) {
        v.push_back(i);
    }
    return v;
}

// Every parameterization of every kind over the distinct scope 0..r-1,
// arity r <= max_arity. Bounds run one past the arity.
inline std::vector<wsp::Constraint> distinct_scopes(int max_arity) {
    using wsp::Constraint;
    std::vector<Constraint> out;
    if (max_arity >= 2) {
        out.push_back(Constraint::eq(0, 1));
        out.push_back(Constraint::neq(0, 1));
    }
    for (int r = 1; r <= max_arity; ++r) {
        for (int split = 1; split < r; ++split) {
            out.push_back(Constraint::bind(range(0, split), range(split, r)));
            out.push_back(Constraint::sep(range(0, split), range(split, r)));
        }
        for (int t = 1; t <= r + 1; ++t) {
            out.push_back(Constraint::at_most(t, range(0, r)));
            out.push_back(Constraint::at_least(t, range(0, r)));
        }
        for (int lo = 1; lo <= r + 1; ++lo) {
            for (int hi = lo; hi <= r + 1; ++hi) {
                out.push_back(Constraint::per_user(lo, hi, range(0, r)));
            }
        }
    }
    return out;
}

// Scopes with repeated tasks and overlapping sides, as produced by merging.
inline std::vector<wsp::Constraint> repeated_scopes() {
    using wsp::Constraint;
    std::vector<Constraint> out = {
        Constraint::eq(0, 0),
        Constraint::neq(0, 0),
        Constraint::bind({0, 1}, {1, 2}),
        Constraint::bind({0}, {0, 1}),
        Constraint::bind({0, 0}, {1, 2}),
        Constraint::bind({0, 1}, {2, 3, 1}),
        Constraint::sep({0, 1}, {1, 2}),
        Constraint::sep({0}, {0}),
        Constraint::sep({0, 0}, {1}),
        Constraint::sep({0, 1}, {0, 1}),
        Constraint::at_most(1, {0, 0, 1}),
        Constraint::at_most(2, {0, 1, 1, 2}),
        Constraint::at_least(2, {0, 0, 1}),
        Constraint::at_least(3, {0, 1, 2, 2}),
    };
    const std::vector<std::vector<wsp::TaskId>> tuples = {
        {0, 0}, {0, 0, 1}, {0, 0, 1, 2}, {0, 0, 1, 1}, {0, 0, 0, 1}, {0, 0, 1, 1, 2}, {0, 0, 0, 1, 2, 3}, {0, 1, 1, 2, 2, 2},
    };
    for (const auto& tuple : tuples) {
        const int r = static_cast<int>(tuple.size());
        for (int lo = 1; lo <= r; ++lo) {
            for (int hi = lo; hi <= r; ++hi) {
                out.push_back(Constraint::per_user(lo, hi, tuple));
            }
        }
    }
    return out;
}

} // namespace catalog
