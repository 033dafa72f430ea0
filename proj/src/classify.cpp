#include "wsp/classify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wsp/constraints.hpp"
#include "wsp/error.hpp"
#include "wsp/partitions.hpp"

namespace wsp {

namespace {

bool is_rgs(const PositionPartition& p) {
    int top = -1;
    for (int v : p) {
        if (v < 0 || v > top + 1) {
            return false;
        }
        top = std::max(top, v);
    }
    return true;
}

std::vector<PositionSet> block_masks(std::span<const int> rgs) {
    std::vector<PositionSet> masks;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        const auto b = static_cast<std::size_t>(rgs[i]);
        if (b >= masks.size()) {
            masks.resize(b + 1, 0);
        }
        masks[b] |= PositionSet{1} << i;
    }
    return masks;
}

// Equality pattern of a tuple as a restricted-growth string.
PositionPartition pattern_of(const std::vector<int>& tuple) {
    PositionPartition out(tuple.size());
    std::map<int, int> label;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        auto [it, inserted] = label.emplace(tuple[i], static_cast<int>(label.size()));
        out[i] = it->second;
    }
    return out;
}

std::uint64_t falling_factorial(int n, int k) {
    std::uint64_t out = 1;
    for (int i = 0; i < k; ++i) {
        out *= static_cast<std::uint64_t>(n - i);
    }
    return out;
}

} // namespace

RelationSpec::RelationSpec(int arity, std::vector<PositionPartition> eligible, int max_arity)
    : arity_(arity), eligible_(std::move(eligible)) {
    if (arity < 1 || arity > max_arity || arity > 31) {
        throw DomainError("relation arity " + std::to_string(arity) + " outside [1, " +
                          std::to_string(std::min(max_arity, 31)) + "]");
    }
    if (eligible_.empty()) {
        throw DomainError("relation has no eligible partition");
    }
    for (const auto& p : eligible_) {
        if (static_cast<int>(p.size()) != arity || !is_rgs(p)) {
            throw DomainError("relation lists a malformed partition");
        }
    }
    std::sort(eligible_.begin(), eligible_.end());
    eligible_.erase(std::unique(eligible_.begin(), eligible_.end()), eligible_.end());
}

bool RelationSpec::accepts(const PositionPartition& p) const {
    return std::binary_search(eligible_.begin(), eligible_.end(), p);
}

PositionPartition partition_from_blocks(int arity, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> block_of(static_cast<std::size_t>(arity), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) {
            throw DomainError("partition has an empty block");
        }
        for (int pos : blocks[b]) {
            if (pos < 0 || pos >= arity || block_of[static_cast<std::size_t>(pos)] != -1) {
                throw DomainError("partition blocks are not a partition of the positions");
            }
            block_of[static_cast<std::size_t>(pos)] = static_cast<int>(b);
        }
    }
    if (std::find(block_of.begin(), block_of.end(), -1) != block_of.end()) {
        throw DomainError("partition blocks do not cover every position");
    }
    return pattern_of(block_of);
}

IndependenceVerdict is_user_independent(const TupleTable& table) {
    if (table.arity < 1) {
        throw DomainError("tuple table arity must be positive");
    }
    if (table.universe < 2 * table.arity) {
        throw DomainError("tuple table universe " + std::to_string(table.universe) +
                          " is smaller than twice the arity");
    }
    std::set<std::vector<int>> members;
    for (const auto& t : table.tuples) {
        if (static_cast<int>(t.size()) != table.arity) {
            throw DomainError("tuple of wrong arity in table");
        }
        for (int v : t) {
            if (v < 1 || v > table.universe) {
                throw DomainError("tuple entry outside the universe");
            }
        }
        members.insert(t);
    }
    std::map<PositionPartition, std::uint64_t> count;
    std::map<PositionPartition, std::vector<int>> first_member;
    for (const auto& t : members) {
        auto p = pattern_of(t);
        ++count[p];
        first_member.emplace(p, t);
    }
    IndependenceVerdict verdict;
    for (const auto& [pattern, n] : count) {
        const int blocks = *std::max_element(pattern.begin(), pattern.end()) + 1;
        if (n == falling_factorial(table.universe, blocks)) {
            continue;
        }
        // Lexicographically least missing tuple with this pattern.
        std::vector<int> tuple(static_cast<std::size_t>(table.arity), 1);
        while (true) {
            if (pattern_of(tuple) == pattern && !members.contains(tuple)) {
                break;
            }
            std::size_t i = tuple.size();
            while (i > 0 && tuple[i - 1] == table.universe) {
                tuple[--i] = 1;
            }
            ++tuple[i - 1];
        }
        verdict.witness = std::make_pair(first_member.at(pattern), tuple);
        return verdict;
    }
    verdict.independent = true;
    std::vector<PositionPartition> eligible;
    for (const auto& [pattern, n] : count) {
        eligible.push_back(pattern);
    }
    verdict.spec = RelationSpec(table.arity, std::move(eligible), 31);
    return verdict;
}

std::vector<PositionSet> eligible_sets(const RelationSpec& spec) {
    std::set<PositionSet> out{0};
    for (const auto& p : spec.eligible()) {
        for (PositionSet b : block_masks(p)) {
            out.insert(b);
        }
    }
    return {out.begin(), out.end()};
}

RegularityVerdict is_regular(const RelationSpec& spec) {
    const auto family = eligible_sets(spec);
    auto in_family = [&](PositionSet s) { return std::binary_search(family.begin(), family.end(), s); };
    RegularityVerdict verdict{true, std::nullopt};
    for_each_partition(spec.arity(), [&](std::span<const int> rgs) {
        const auto blocks = block_masks(rgs);
        if (!std::all_of(blocks.begin(), blocks.end(), in_family)) {
            return true;
        }
        PositionPartition p(rgs.begin(), rgs.end());
        if (!spec.accepts(p)) {
            verdict = {false, std::move(p)};
            return false;
        }
        return true;
    });
    return verdict;
}

ClosureVerdict is_intersection_closed(const RelationSpec& spec) {
    if (!is_regular(spec).regular) {
        throw ClassificationError("intersection-closure is only defined for regular relations");
    }
    const auto family = eligible_sets(spec);
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const PositionSet shared = family[i] & family[j];
            if (!std::binary_search(family.begin(), family.end(), shared)) {
                return {false, std::make_pair(family[i], family[j])};
            }
        }
    }
    return {true, std::nullopt};
}

bool matches_ternary_condition(const RelationSpec& spec) {
    if (spec.arity() != 3) {
        throw DomainError("the ternary condition needs a relation of arity 3");
    }
    return spec.accepts({0, 0, 1}) && spec.accepts({0, 1, 0}) && !spec.accepts({0, 1, 2});
}

RelationSpec relation_of(const Constraint& c, int max_arity) {
    check_constraint(c);
    const int arity = static_cast<int>(c.scope.size());
    if (static_cast<std::size_t>(arity) != c.scope_set().size()) {
        throw DomainError("relation_of needs a scope without repeated tasks");
    }
    if (arity > max_arity) {
        throw DomainError("relation arity " + std::to_string(arity) + " exceeds the cap");
    }
    const TaskId top = *std::max_element(c.scope.begin(), c.scope.end());
    std::vector<int> label(static_cast<std::size_t>(top) + 1, -1);
    std::vector<PositionPartition> eligible;
    for_each_partition(arity, [&](std::span<const int> rgs) {
        for (int i = 0; i < arity; ++i) {
            label[static_cast<std::size_t>(c.scope[static_cast<std::size_t>(i)])] = rgs[static_cast<std::size_t>(i)];
        }
        if (eligible_labels(c, label)) {
            eligible.emplace_back(rgs.begin(), rgs.end());
        }
        return true;
    });
    if (eligible.empty()) {
        throw DomainError("constraint application is unsatisfiable; it has no relation spec");
    }
    return RelationSpec(arity, std::move(eligible), max_arity);
}

} // namespace wsp
