#include "wsp/constraints.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

#include "wsp/error.hpp"

namespace wsp {

namespace {

// Tasks-per-user bookkeeping: PerUser counts scope positions, so a task
// that occurs twice in the tuple weighs 2.
std::map<TaskId, int> multiplicities(const Constraint& c) {
    std::map<TaskId, int> out;
    for (TaskId s : c.scope) {
        ++out[s];
    }
    return out;
}

bool unit_weights(const Constraint& c) {
    return c.scope_set().size() == c.scope.size();
}

// Is there g >= 0 with g*lower <= q <= g*upper?
bool representable(int q, int lower, int upper) {
    if (q == 0) {
        return true;
    }
    for (int g = (q + upper - 1) / upper; g * lower <= q; ++g) {
        if (g * upper >= q) {
            return true;
        }
    }
    return false;
}

// Can the multiset of weights be split into groups whose sums all lie in
// [lower, upper]? Exact search with memoisation on the sorted multiset.
class GroupingSearch {
public:
    GroupingSearch(int lower, int upper) : lower_(lower), upper_(upper) {}

    bool feasible(std::vector<int> weights) {
        std::sort(weights.begin(), weights.end(), std::greater<>());
        return solve(weights);
    }

private:
    bool solve(const std::vector<int>& weights) {
        if (weights.empty()) {
            return true;
        }
        if (weights.front() > upper_) {
            return false;
        }
        if (auto it = memo_.find(weights); it != memo_.end()) {
            return it->second;
        }
        // Group the heaviest item with a sub-multiset of the rest.
        std::vector<std::pair<int, int>> rest; // (value, count), descending
        for (std::size_t i = 1; i < weights.size(); ++i) {
            if (!rest.empty() && rest.back().first == weights[i]) {
                ++rest.back().second;
            } else {
                rest.emplace_back(weights[i], 1);
            }
        }
        std::vector<int> take(rest.size(), 0);
        bool ok = choose(rest, take, 0, weights.front());
        memo_.emplace(weights, ok);
        return ok;
    }

    bool choose(const std::vector<std::pair<int, int>>& rest, std::vector<int>& take,
                std::size_t idx, int sum) {
        if (sum > upper_) {
            return false;
        }
        if (idx == rest.size()) {
            if (sum < lower_) {
                return false;
            }
            std::vector<int> remaining;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                remaining.insert(remaining.end(), rest[i].second - take[i], rest[i].first);
            }
            return solve(remaining);
        }
        for (int n = 0; n <= rest[idx].second; ++n) {
            take[idx] = n;
            if (choose(rest, take, idx + 1, sum + n * rest[idx].first)) {
                take[idx] = 0;
                return true;
            }
        }
        take[idx] = 0;
        return false;
    }

    int lower_;
    int upper_;
    std::map<std::vector<int>, bool> memo_;
};

bool per_user_set_eligible(const Constraint& c, const TaskSet& t) {
    const int lower = c.params[0];
    const int upper = c.params[1];
    const auto weight = multiplicities(c);
    int inside = 0;
    std::vector<int> outside;
    for (const auto& [task, w] : weight) {
        if (contains(t, task)) {
            inside += w;
        } else {
            outside.push_back(w);
        }
    }
    if (inside < lower || inside > upper) {
        return false;
    }
    if (unit_weights(c)) {
        return representable(static_cast<int>(outside.size()), lower, upper);
    }
    return GroupingSearch(lower, upper).feasible(std::move(outside));
}

bool sep_has_pairs(const Constraint& c) {
    for (std::size_t i = 0; i < c.split; ++i) {
        for (std::size_t j = c.split; j < c.scope.size(); ++j) {
            if (c.scope[i] != c.scope[j]) {
                return true;
            }
        }
    }
    return false;
}

bool sides_overlap(const Constraint& c) {
    return !set_intersection(c.left_set(), c.right_set()).empty();
}

// Lexicographically first combination of `pool` of size `count` whose
// union with `base` passes `accept`.
template <class Accept>
std::optional<TaskSet> first_combination(const TaskSet& base, const TaskSet& pool,
                                         std::size_t count, Accept accept) {
    if (count > pool.size()) {
        return std::nullopt;
    }
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        TaskSet candidate = base;
        for (std::size_t i : idx) {
            candidate.push_back(pool[i]);
        }
        candidate = make_set(std::move(candidate));
        if (accept(candidate)) {
            return candidate;
        }
        // advance to next combination
        std::size_t pos = count;
        while (pos > 0 && idx[pos - 1] == pool.size() - count + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            return std::nullopt;
        }
        ++idx[pos - 1];
        for (std::size_t i = pos; i < count; ++i) {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

void require_subset_of_scope(const Constraint& c, const TaskSet& t, const char* op) {
    if (!is_subset(t, c.scope_set())) {
        throw DomainError(std::string(op) + ": task set is not contained in the constraint scope");
    }
}

} // namespace

void check_constraint(const Constraint& c) {
    for (TaskId s : c.scope) {
        if (s < 0) {
            throw DomainError("negative task index in scope");
        }
    }
    switch (c.kind) {
    case Kind::Eq2:
    case Kind::Neq2:
        if (c.scope.size() != 2 || !c.params.empty()) {
            throw DomainError(std::string(kind_name(c.kind)) + " takes exactly two tasks and no parameters");
        }
        break;
    case Kind::Bind:
    case Kind::Sep:
        if (c.split == 0 || c.split >= c.scope.size() || !c.params.empty()) {
            throw DomainError(std::string(kind_name(c.kind)) + " needs two nonempty task sets");
        }
        break;
    case Kind::AtMost:
    case Kind::AtLeast:
        if (c.params.size() != 1 || c.params[0] < 1) {
            throw DomainError(std::string(kind_name(c.kind)) + " needs a bound t >= 1");
        }
        if (c.scope.empty()) {
            throw DomainError(std::string(kind_name(c.kind)) + " needs a nonempty scope");
        }
        break;
    case Kind::PerUser:
        if (c.params.size() != 2 || c.params[0] < 1 || c.params[0] > c.params[1]) {
            throw DomainError("PERUSER needs bounds 1 <= t_l <= t_u");
        }
        if (c.scope.empty()) {
            throw DomainError("PERUSER needs a nonempty scope");
        }
        break;
    }
}

bool eligible_labels(const Constraint& c, std::span<const int> label_of) {
    const auto& sc = c.scope;
    auto label = [&](TaskId s) { return label_of[static_cast<std::size_t>(s)]; };
    switch (c.kind) {
    case Kind::Eq2:
        return label(sc[0]) == label(sc[1]);
    case Kind::Neq2:
        return label(sc[0]) != label(sc[1]);
    case Kind::Bind:
    case Kind::Sep: {
        const bool want_equal = c.kind == Kind::Bind;
        for (std::size_t i = 0; i < c.split; ++i) {
            for (std::size_t j = c.split; j < sc.size(); ++j) {
                if ((label(sc[i]) == label(sc[j])) == want_equal) {
                    return true;
                }
            }
        }
        return false;
    }
    case Kind::AtMost:
    case Kind::AtLeast: {
        std::vector<int> labels;
        labels.reserve(sc.size());
        for (TaskId s : sc) {
            labels.push_back(label(s));
        }
        const auto distinct = static_cast<int>(make_set(std::move(labels)).size());
        return c.kind == Kind::AtMost ? distinct <= c.params[0] : distinct >= c.params[0];
    }
    case Kind::PerUser: {
        std::map<int, int> count;
        for (TaskId s : sc) {
            ++count[label(s)];
        }
        return std::all_of(count.begin(), count.end(), [&](const auto& kv) {
            return kv.second >= c.params[0] && kv.second <= c.params[1];
        });
    }
    }
    return false;
}

bool eligible_partition(const Constraint& c, const TaskPartition& p) {
    const TaskSet scope = c.scope_set();
    TaskSet seen;
    for (const auto& block : p.blocks) {
        if (block.empty()) {
            throw DomainError("eligible_partition: empty block");
        }
        seen.insert(seen.end(), block.begin(), block.end());
    }
    std::sort(seen.begin(), seen.end());
    if (seen != scope) {
        throw DomainError("eligible_partition: partition does not cover exactly the scope");
    }
    std::vector<int> label(static_cast<std::size_t>(scope.back()) + 1, -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        for (TaskId s : p.blocks[b]) {
            label[static_cast<std::size_t>(s)] = static_cast<int>(b);
        }
    }
    return eligible_labels(c, label);
}

bool eligible_set(const Constraint& c, const TaskSet& raw) {
    const TaskSet t = make_set(raw);
    require_subset_of_scope(c, t, "eligible_set");
    if (t.empty()) {
        return true;
    }
    const TaskSet scope = c.scope_set();
    const auto r = static_cast<int>(scope.size());
    const auto size = static_cast<int>(t.size());
    switch (c.kind) {
    case Kind::Eq2:
        return t == scope;
    case Kind::Neq2:
        return c.scope[0] != c.scope[1] && size == 1;
    case Kind::Sep:
        return sep_has_pairs(c) && t != scope;
    case Kind::Bind:
        if (sides_overlap(c)) {
            return true;
        }
        return t != c.left_set() && t != c.right_set();
    case Kind::AtMost:
        return c.params[0] >= 2 || t == scope;
    case Kind::AtLeast:
        return 1 + (r - size) >= c.params[0];
    case Kind::PerUser:
        return per_user_set_eligible(c, t);
    }
    return false;
}

std::optional<TaskSet> eligible_superset(const Constraint& c, const TaskSet& raw) {
    const TaskSet t = make_set(raw);
    if (eligible_set(c, t)) {
        throw ContractError("eligible_superset: the task set is already eligible");
    }
    const TaskSet scope = c.scope_set();
    const TaskSet pool = set_difference(scope, t);
    switch (c.kind) {
    case Kind::Eq2:
        return scope;
    case Kind::AtMost:
        return scope; // only t == 1 reaches here
    case Kind::Neq2:
    case Kind::Sep:
    case Kind::AtLeast:
        return std::nullopt;
    case Kind::Bind: {
        const TaskSet other = t == c.left_set() ? c.right_set() : c.left_set();
        return make_set(set_union(t, {other.front()}));
    }
    case Kind::PerUser: {
        const int lower = c.params[0];
        const int upper = c.params[1];
        const auto r = static_cast<int>(scope.size());
        if (unit_weights(c)) {
            for (std::size_t add = 1; add <= pool.size(); ++add) {
                const int z = static_cast<int>(t.size() + add);
                if (z >= lower && z <= upper && representable(r - z, lower, upper)) {
                    TaskSet out = t;
                    out.insert(out.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(add));
                    return make_set(std::move(out));
                }
            }
            return std::nullopt;
        }
        for (std::size_t add = 1; add <= pool.size(); ++add) {
            auto found = first_combination(t, pool, add,
                                           [&](const TaskSet& cand) { return per_user_set_eligible(c, cand); });
            if (found) {
                return found;
            }
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

std::optional<TaskSet> required_additions(const Constraint& c, const TaskSet& raw) {
    const TaskSet t = make_set(raw);
    auto superset = eligible_superset(c, t);
    if (!superset) {
        return std::nullopt;
    }
    TaskSet minimal = *superset;
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        const TaskSet extra = set_difference(minimal, t);
        for (auto it = extra.rbegin(); it != extra.rend(); ++it) {
            TaskSet candidate = set_difference(minimal, {*it});
            if (candidate.size() > t.size() && eligible_set(c, candidate)) {
                minimal = std::move(candidate);
                shrunk = true;
            }
        }
    }
    return set_difference(minimal, t);
}

Classification classify_constraint(const Constraint& c) {
    const auto r = static_cast<int>(c.scope_set().size());
    switch (c.kind) {
    case Kind::Eq2:
    case Kind::Neq2:
    case Kind::Sep:
        return {true, true};
    case Kind::Bind: {
        if (sides_overlap(c)) {
            return {true, true}; // always satisfied
        }
        const auto left = c.left_set().size();
        const auto right = c.right_set().size();
        if (left == 1 && right == 1) {
            return {true, true};
        }
        if (left == 1 || right == 1) {
            return {true, false};
        }
        return {false, false};
    }
    case Kind::AtMost: {
        const int t = c.params[0];
        if (t == 1 || t >= r) {
            return {true, true};
        }
        return {false, false};
    }
    case Kind::AtLeast: {
        const int t = c.params[0];
        if (t <= 2 || t >= r) {
            return {true, true};
        }
        return {false, false};
    }
    case Kind::PerUser: {
        const int lower = c.params[0];
        const int upper = c.params[1];
        if (lower == 1) {
            return {true, true};
        }
        if (unit_weights(c)) {
            // Every subset of an eligible size is eligible, so closure reduces
            // to the sizes two eligible sets can share.
            std::vector<int> sizes;
            for (int z = lower; z <= std::min(upper, r); ++z) {
                if (representable(r - z, lower, upper)) {
                    sizes.push_back(z);
                }
            }
            auto eligible_size = [&](int z) { return std::binary_search(sizes.begin(), sizes.end(), z); };
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                for (std::size_t j = i; j < sizes.size(); ++j) {
                    const int a = sizes[i];
                    const int b = sizes[j];
                    for (int shared = std::max(1, a + b - r); shared < a; ++shared) {
                        if (!eligible_size(shared)) {
                            return {true, false};
                        }
                    }
                }
            }
            return {true, true};
        }
        const TaskSet scope = c.scope_set();
        if (scope.size() > 20) {
            throw ResourceError("classify_constraint: PERUSER with repeated tasks over more than 20 distinct tasks");
        }
        std::vector<TaskSet> family;
        for (std::uint32_t mask = 1; mask < (1u << scope.size()); ++mask) {
            TaskSet t;
            for (std::size_t i = 0; i < scope.size(); ++i) {
                if (mask & (1u << i)) {
                    t.push_back(scope[i]);
                }
            }
            if (per_user_set_eligible(c, t)) {
                family.push_back(std::move(t));
            }
        }
        std::set<TaskSet> members(family.begin(), family.end());
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                TaskSet shared = set_intersection(family[i], family[j]);
                if (!shared.empty() && !members.contains(shared)) {
                    return {true, false};
                }
            }
        }
        return {true, true};
    }
    }
    return {false, false};
}

} // namespace wsp
