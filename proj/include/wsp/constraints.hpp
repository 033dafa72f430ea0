#pragma once

#include <optional>
#include <span>

#include "wsp/core.hpp"

namespace wsp {

/// Dichotomy metadata of a single constraint application.
/// `intersection_closed` is only meaningful for regular constraints and
/// is reported false otherwise.
struct Classification {
    bool regular = false;
    bool intersection_closed = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Checks the kind-specific parameter and arity invariants; throws
/// DomainError describing the first violation.
void check_constraint(const Constraint& c);

/// Partition semantics evaluated on block labels: `label_of[s]` names the
/// block of task s; two scope tasks share a block iff their labels agree.
/// Labels of tasks outside the scope are ignored.
bool eligible_labels(const Constraint& c, std::span<const int> label_of);

/// True iff every plan inducing `p` on the scope satisfies `c`.
/// Throws DomainError unless p partitions exactly the scope set.
bool eligible_partition(const Constraint& c, const TaskPartition& p);

/// True iff `t` is a block of some eligible partition of the scope.
/// The empty set is eligible by convention. Throws DomainError if t is
/// not contained in the scope.
bool eligible_set(const Constraint& c, const TaskSet& t);

/// Some eligible strict superset of `t` inside the scope, preferring the
/// fewest added tasks and then the lowest task indices; nullopt if none.
/// Throws ContractError when `t` is already eligible.
std::optional<TaskSet> eligible_superset(const Constraint& c, const TaskSet& t);

/// Tasks that a minimal eligible superset adds to the ineligible set `t`.
/// For intersection-closed constraints every returned task lies in every
/// eligible superset of `t`. nullopt signals a dead end (no eligible
/// superset exists). Throws ContractError when `t` is eligible.
std::optional<TaskSet> required_additions(const Constraint& c, const TaskSet& t);

/// Regular / intersection-closed verdicts for this application, computed
/// in closed form from the kind, its parameters and the scope shape.
Classification classify_constraint(const Constraint& c);

} // namespace wsp
