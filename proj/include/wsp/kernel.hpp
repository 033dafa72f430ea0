#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsp/core.hpp"

namespace wsp {

/// One application of task merging: `absorbed` was replaced by
/// `survivor`, whose authorization became the intersection of both.
struct MergeRecord {
    std::string survivor;
    std::string absorbed;
    std::vector<std::string> authorization;

    friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

/// Replaces `absorbed` by `survivor` in every scope, intersects their
/// authorizations, drops explicit equalities between the two and removes
/// `absorbed`. Duplicated constraints are kept. Throws DomainError if the
/// tasks coincide or are out of range.
std::pair<Schema, MergeRecord> merge_tasks(const Schema& schema, TaskId survivor, TaskId absorbed);

struct EqualityElimination {
    Schema schema;
    std::vector<MergeRecord> merges;
    bool unsatisfiable = false;
    std::string reason; // set when unsatisfiable
};

/// Merges tasks along implied equalities until every singleton is
/// eligible for every constraint. Tasks are scanned in declaration order,
/// constraints in list order, and the lowest required addition is merged
/// first. Throws ClassificationError if a constraint is not regular and
/// intersection-closed.
EqualityElimination eliminate_equalities(const Schema& schema);

struct Marking {
    UserSet marked;
    TaskSet hard;
    std::vector<UserId> representative; // per task, Plan::kUnassigned for hard tasks
};

/// User marking by repeated Hall-violator extraction followed by a
/// system of distinct representatives for the remaining tasks.
Marking mark_users(const Schema& schema);

enum class KernelVerdict { Reduced, TriviallyUnsat };

struct KernelResult {
    KernelVerdict verdict = KernelVerdict::Reduced;
    Schema original;
    Schema reduced;
    std::vector<MergeRecord> merges;
    std::vector<std::string> marked;
    std::vector<std::string> hard;
    std::vector<std::pair<std::string, std::string>> representatives; // easy task -> user
    std::string reason;

    /// Representative of each reduced task as a reduced user index, or
    /// Plan::kUnassigned for hard tasks.
    std::vector<UserId> representative_indices() const;
};

/// Equality elimination, user marking and removal of unmarked users.
/// The reduced schema has k' <= k tasks, n' <= k' users and m' <= m
/// constraints, and is satisfiable iff the input is.
KernelResult kernelize(const Schema& schema);

/// Completes a plan fixed on the hard tasks, or returns nullopt when no
/// valid completion exists. Blocks of the partial plan are grown by
/// required additions until eligible; remaining tasks get their
/// representatives. Throws ContractError if `partial` does not assign
/// exactly the tasks without a representative.
std::optional<Plan> extend_partial_plan(const Schema& schema, const Plan& partial,
                                        const std::vector<UserId>& representative);

/// Undoes the merges on a task -> user assignment (by name).
std::map<std::string, std::string> lift_assignment(const std::vector<MergeRecord>& merges,
                                                   std::map<std::string, std::string> assignment);

/// Lifts a valid plan of the reduced schema to the original schema.
/// Throws ContractError if the plan is not valid for the reduced schema.
Plan lift_plan(const KernelResult& result, const Plan& reduced_plan);

/// Plan on `schema` from a name-level assignment; unknown names throw DomainError.
Plan plan_from_names(const Schema& schema, const std::map<std::string, std::string>& assignment);

} // namespace wsp
