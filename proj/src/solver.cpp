#include "wsp/solver.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "wsp/constraints.hpp"
#include "wsp/error.hpp"
#include "wsp/matching.hpp"

namespace wsp {

namespace {

void require_valid(const Schema& schema, const char* op) {
    const auto report = validate_schema(schema);
    if (!report.ok()) {
        throw DomainError(std::string(op) + ": invalid schema: " + report.errors.front());
    }
}

std::optional<Plan> match_blocks(const Schema& schema, const std::vector<TaskSet>& blocks,
                                 const std::vector<UserSet>& block_auth) {
    const Matching m = max_bipartite_matching(block_auth, static_cast<int>(schema.num_users()));
    if (!m.perfect()) {
        return std::nullopt;
    }
    Plan plan(schema.num_tasks());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (TaskId s : blocks[b]) {
            plan.assign(s, m.left_to_right[b]);
        }
    }
    return plan;
}

class PartitionSearch {
public:
    explicit PartitionSearch(const Schema& schema)
        : schema_(schema),
          k_(static_cast<int>(schema.num_tasks())),
          label_(schema.num_tasks(), -1),
          closing_(schema.num_tasks()) {
        for (const auto& c : schema.constraints) {
            const TaskId last = *std::max_element(c.scope.begin(), c.scope.end());
            closing_[static_cast<std::size_t>(last)].push_back(&c);
        }
    }

    std::optional<Plan> run() {
        if (k_ == 0) {
            ++stats.partitions_examined;
            return Plan(0);
        }
        return extend(0);
    }

    SolveStats stats;

private:
    std::optional<Plan> extend(int pos) {
        if (pos == k_) {
            ++stats.partitions_examined;
            ++stats.matchings_attempted;
            return match_blocks(schema_, blocks_, block_auth_);
        }
        const auto task = static_cast<std::size_t>(pos);
        const int open = static_cast<int>(blocks_.size());
        for (int b = 0; b <= open; ++b) {
            UserSet narrowed;
            if (b == open) {
                if (blocks_.size() >= schema_.num_users()) {
                    break;
                }
                narrowed = schema_.auth[task];
            } else {
                narrowed = set_intersection(block_auth_[static_cast<std::size_t>(b)], schema_.auth[task]);
            }
            if (narrowed.empty()) {
                continue;
            }
            label_[task] = b;
            if (!closing_ok(task)) {
                continue;
            }
            if (b == open) {
                blocks_.push_back({pos});
                block_auth_.push_back(std::move(narrowed));
            } else {
                blocks_[static_cast<std::size_t>(b)].push_back(pos);
                std::swap(block_auth_[static_cast<std::size_t>(b)], narrowed);
            }
            auto found = extend(pos + 1);
            if (b == open) {
                blocks_.pop_back();
                block_auth_.pop_back();
            } else {
                blocks_[static_cast<std::size_t>(b)].pop_back();
                std::swap(block_auth_[static_cast<std::size_t>(b)], narrowed);
            }
            if (found) {
                return found;
            }
        }
        label_[task] = -1;
        return std::nullopt;
    }

    bool closing_ok(std::size_t task) const {
        return std::all_of(closing_[task].begin(), closing_[task].end(),
                           [&](const Constraint* c) { return eligible_labels(*c, label_); });
    }

    const Schema& schema_;
    int k_;
    std::vector<int> label_;
    std::vector<std::vector<const Constraint*>> closing_; // constraints keyed by their last scope task
    std::vector<TaskSet> blocks_;
    std::vector<UserSet> block_auth_;
};

std::uint64_t plan_space(const Schema& schema) {
    std::uint64_t total = 1;
    const std::uint64_t n = schema.num_users();
    for (std::size_t i = 0; i < schema.num_tasks(); ++i) {
        if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= n;
    }
    return total;
}

// Calls visit(plan) for every authorized, eligible complete plan in
// lexicographic order until it returns false.
template <class Visitor>
void enumerate_valid_plans(const Schema& schema, const BruteForceOptions& options, SolveStats& stats,
                           Visitor&& visit) {
    if (plan_space(schema) > options.max_plans) {
        throw ResourceError("brute force over n^k plans exceeds the cap of " +
                            std::to_string(options.max_plans) + " plans");
    }
    const std::size_t k = schema.num_tasks();
    for (const auto& a : schema.auth) {
        if (a.empty()) {
            return;
        }
    }
    std::vector<std::size_t> digit(k, 0);
    Plan plan(k);
    for (std::size_t s = 0; s < k; ++s) {
        plan.assign(static_cast<TaskId>(s), schema.auth[s][0]);
    }
    while (true) {
        ++stats.plans_examined;
        const bool eligible = std::all_of(schema.constraints.begin(), schema.constraints.end(),
                                          [&](const Constraint& c) { return satisfies(plan, c); });
        if (eligible && !visit(plan)) {
            return;
        }
        std::size_t i = k;
        while (i > 0 && digit[i - 1] + 1 == schema.auth[i - 1].size()) {
            digit[i - 1] = 0;
            plan.assign(static_cast<TaskId>(i - 1), schema.auth[i - 1][0]);
            --i;
        }
        if (i == 0) {
            return;
        }
        ++digit[i - 1];
        plan.assign(static_cast<TaskId>(i - 1), schema.auth[i - 1][digit[i - 1]]);
    }
}

} // namespace

SolveOutcome solve_fpt(const Schema& schema, const FptOptions& options) {
    if (static_cast<int>(schema.num_tasks()) > options.max_tasks) {
        throw ResourceError("solve_fpt: " + std::to_string(schema.num_tasks()) +
                            " tasks exceed the cap of " + std::to_string(options.max_tasks) +
                            "; kernelize first or raise the cap");
    }
    require_valid(schema, "solve_fpt");
    PartitionSearch search(schema);
    SolveOutcome outcome;
    outcome.plan = search.run();
    outcome.stats = search.stats;
    outcome.status = outcome.plan ? Status::Satisfiable : Status::Unsatisfiable;
    return outcome;
}

SolveOutcome solve_bruteforce(const Schema& schema, const BruteForceOptions& options) {
    require_valid(schema, "solve_bruteforce");
    SolveOutcome outcome;
    enumerate_valid_plans(schema, options, outcome.stats, [&](const Plan& plan) {
        outcome.plan = plan;
        return false;
    });
    outcome.status = outcome.plan ? Status::Satisfiable : Status::Unsatisfiable;
    return outcome;
}

std::vector<Plan> project(const Schema& schema, const TaskSet& raw, const BruteForceOptions& options) {
    require_valid(schema, "project");
    const TaskSet tasks = make_set(raw);
    for (TaskId s : tasks) {
        if (s < 0 || static_cast<std::size_t>(s) >= schema.num_tasks()) {
            throw DomainError("project: unknown task index " + std::to_string(s));
        }
    }
    std::set<Plan> seen;
    SolveStats stats;
    enumerate_valid_plans(schema, options, stats, [&](const Plan& plan) {
        Plan restricted(schema.num_tasks());
        for (TaskId s : tasks) {
            restricted.assign(s, plan[s]);
        }
        seen.insert(std::move(restricted));
        return true;
    });
    return {seen.begin(), seen.end()};
}

std::optional<Plan> assign_blocks(const Schema& schema, const TaskPartition& partition) {
    TaskPartition p = partition;
    p.canonicalize();
    std::vector<TaskId> all(schema.num_tasks());
    std::iota(all.begin(), all.end(), 0);
    TaskSet carrier;
    for (const auto& b : p.blocks) {
        carrier.insert(carrier.end(), b.begin(), b.end());
    }
    std::sort(carrier.begin(), carrier.end());
    if (carrier != all) {
        throw DomainError("assign_blocks: partition does not cover exactly the schema tasks");
    }
    std::vector<UserSet> block_auth;
    for (const auto& b : p.blocks) {
        UserSet common = schema.auth[static_cast<std::size_t>(b.front())];
        for (TaskId s : b) {
            common = set_intersection(common, schema.auth[static_cast<std::size_t>(s)]);
        }
        block_auth.push_back(std::move(common));
    }
    return match_blocks(schema, p.blocks, block_auth);
}

} // namespace wsp
