#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wsp/core.hpp"

namespace wsp {

/// Subset of argument positions {0, ..., r-1} as a bit mask.
using PositionSet = std::uint32_t;

/// A set partition of argument positions as a restricted-growth string.
using PositionPartition = std::vector<int>;

inline constexpr int kDefaultMaxArity = 8;

/// Explicit user-independent relation: its arity and the partitions of
/// the argument positions it accepts.
class RelationSpec {
public:
    /// Throws DomainError on malformed partitions, an empty eligible list,
    /// or arity outside [1, max_arity].
    RelationSpec(int arity, std::vector<PositionPartition> eligible, int max_arity = kDefaultMaxArity);

    int arity() const { return arity_; }
    const std::vector<PositionPartition>& eligible() const { return eligible_; }
    bool accepts(const PositionPartition& p) const;

private:
    int arity_;
    std::vector<PositionPartition> eligible_; // sorted, canonical
};

/// Canonical restricted-growth string of the given blocks (positions 0-based).
PositionPartition partition_from_blocks(int arity, const std::vector<std::vector<int>>& blocks);

/// Explicit relation over users {1, ..., universe}.
struct TupleTable {
    int arity = 0;
    int universe = 0;
    std::vector<std::vector<int>> tuples;
};

struct IndependenceVerdict {
    bool independent = false;
    std::optional<RelationSpec> spec;
    // On failure: a tuple in the table and one with the same equality
    // pattern that is missing from it.
    std::optional<std::pair<std::vector<int>, std::vector<int>>> witness;
};

/// Throws DomainError when universe < 2 * arity.
IndependenceVerdict is_user_independent(const TupleTable& table);

/// E_R: every block of an eligible partition, plus the empty set; sorted.
std::vector<PositionSet> eligible_sets(const RelationSpec& spec);

struct RegularityVerdict {
    bool regular = false;
    std::optional<PositionPartition> counterexample;
};

RegularityVerdict is_regular(const RelationSpec& spec);

struct ClosureVerdict {
    bool closed = false;
    std::optional<std::pair<PositionSet, PositionSet>> witness;
};

/// Throws ClassificationError if the relation is not regular.
ClosureVerdict is_intersection_closed(const RelationSpec& spec);

/// {{1,2},{3}} and {{1,3},{2}} eligible while {{1},{2},{3}} is not.
/// Throws DomainError unless the arity is 3.
bool matches_ternary_condition(const RelationSpec& spec);

/// Relation of a catalog constraint whose scope tuple has no repeated
/// tasks; position i is scope[i]. Throws DomainError for repeated tasks
/// or an unsatisfiable application.
RelationSpec relation_of(const Constraint& c, int max_arity = kDefaultMaxArity);

} // namespace wsp
