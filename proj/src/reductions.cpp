#include "wsp/reductions.hpp"

#include <algorithm>
#include <random>

#include "wsp/classify.hpp"
#include "wsp/constraints.hpp"
#include "wsp/error.hpp"
#include "wsp/partitions.hpp"

namespace wsp {

namespace {

// mt19937_64 is fully specified by the standard; distributions are not,
// so sampling goes through these helpers to stay reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    int below(int bound) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

    std::vector<int> sample(int population, int count) {
        std::vector<int> pool(static_cast<std::size_t>(population));
        for (int i = 0; i < population; ++i) {
            pool[static_cast<std::size_t>(i)] = i;
        }
        for (int i = 0; i < count; ++i) {
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(between(i, population - 1))]);
        }
        pool.resize(static_cast<std::size_t>(count));
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

Schema dummy_instance(bool satisfiable) {
    Schema s;
    s.tasks = {"d"};
    s.users = {"u"};
    s.auth = {satisfiable ? UserSet{0} : UserSet{}};
    return s;
}

RelationSpec gadget_relation(const TernaryGadget& gadget) {
    const Constraint c = gadget.apply(0, 1, 2);
    std::vector<PositionPartition> eligible;
    std::vector<int> label(3);
    for_each_partition(3, [&](std::span<const int> rgs) {
        std::copy(rgs.begin(), rgs.end(), label.begin());
        if (eligible_labels(c, label)) {
            eligible.emplace_back(rgs.begin(), rgs.end());
        }
        return true;
    });
    try {
        return RelationSpec(3, std::move(eligible));
    } catch (const DomainError& e) {
        throw ParameterError("gadget " + gadget.name + ": " + e.what());
    }
}

int param_or(const KindTemplate& kt, std::size_t i, int drawn) {
    return i < kt.fixed_params.size() ? kt.fixed_params[i] : drawn;
}

} // namespace

void check_formula(const CnfFormula& f) {
    if (f.num_vars < 0) {
        throw ParameterError("negative variable count");
    }
    for (const auto& clause : f.clauses) {
        if (clause.empty()) {
            throw ParameterError("empty clause");
        }
        for (int lit : clause) {
            if (lit == 0 || std::abs(lit) > f.num_vars) {
                throw ParameterError("literal " + std::to_string(lit) + " outside the declared variables");
            }
        }
    }
}

Schema sat_to_wsp(const CnfFormula& f) {
    check_formula(f);
    if (f.num_vars < 1) {
        throw ParameterError("sat_to_wsp needs at least one variable");
    }
    Schema w;
    w.users = {"t", "f"};
    constexpr UserId kTrue = 0;
    constexpr UserId kFalse = 1;
    w.tasks.push_back("d");
    w.auth.push_back({kFalse});
    auto positive = [](int v) { return static_cast<TaskId>(2 * v - 1); };
    auto negative = [](int v) { return static_cast<TaskId>(2 * v); };
    for (int v = 1; v <= f.num_vars; ++v) {
        w.tasks.push_back("s" + std::to_string(v));
        w.tasks.push_back("~s" + std::to_string(v));
        w.auth.push_back({kTrue, kFalse});
        w.auth.push_back({kTrue, kFalse});
        w.constraints.push_back(Constraint::at_least(2, {positive(v), negative(v)}));
    }
    for (const auto& clause : f.clauses) {
        std::vector<TaskId> scope;
        for (int lit : clause) {
            const TaskId t = lit > 0 ? positive(lit) : negative(-lit);
            if (std::find(scope.begin(), scope.end(), t) == scope.end()) {
                scope.push_back(t);
            }
        }
        scope.push_back(0);
        w.constraints.push_back(Constraint::at_least(2, std::move(scope)));
    }
    return w;
}

bool solve_sat_bruteforce(const CnfFormula& f, int max_vars) {
    check_formula(f);
    if (f.num_vars > max_vars) {
        throw ResourceError("brute-force SAT limited to " + std::to_string(max_vars) + " variables");
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
        auto value = [&](int lit) {
            const bool v = (bits >> (std::abs(lit) - 1)) & 1;
            return lit > 0 ? v : !v;
        };
        const bool all = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const auto& clause) {
            return std::any_of(clause.begin(), clause.end(), value);
        });
        if (all) {
            return true;
        }
    }
    return false;
}

void check_mchs(const MchsInstance& inst) {
    const auto n = static_cast<int>(inst.vertices.size());
    if (static_cast<int>(inst.color_of.size()) != n) {
        throw ParameterError("every vertex needs exactly one color");
    }
    if (inst.colors < 1) {
        throw ParameterError("at least one color is required");
    }
    std::vector<int> class_size(static_cast<std::size_t>(inst.colors) + 1, 0);
    for (int c : inst.color_of) {
        if (c < 1 || c > inst.colors) {
            throw ParameterError("color " + std::to_string(c) + " outside [1, " + std::to_string(inst.colors) + "]");
        }
        ++class_size[static_cast<std::size_t>(c)];
    }
    for (int c = 1; c <= inst.colors; ++c) {
        if (class_size[static_cast<std::size_t>(c)] == 0) {
            throw ParameterError("color class " + std::to_string(c) + " is empty");
        }
    }
    for (const auto& set : inst.sets) {
        for (int v : set) {
            if (v < 0 || v >= n) {
                throw ParameterError("set member outside the vertex list");
            }
        }
    }
    if (inst.sets.size() >= 2 && static_cast<std::size_t>(inst.colors) > inst.sets.size()) {
        throw ParameterError("more colors than sets");
    }
}

TernaryGadget bind_gadget() {
    return {"bind", [](TaskId a, TaskId b, TaskId c) { return Constraint::bind({a}, {b, c}); }};
}

TernaryGadget at_most_gadget() {
    return {"atmost", [](TaskId a, TaskId b, TaskId c) { return Constraint::at_most(2, {a, b, c}); }};
}

TernaryGadget gadget_by_name(const std::string& name) {
    if (name == "bind") {
        return bind_gadget();
    }
    if (name == "atmost") {
        return at_most_gadget();
    }
    if (name == "neq2") {
        return {"neq2", [](TaskId a, TaskId b, TaskId) { return Constraint::neq(a, b); }};
    }
    if (name == "sep") {
        return {"sep", [](TaskId a, TaskId b, TaskId c) { return Constraint::sep({a}, {b, c}); }};
    }
    if (name == "atleast2") {
        return {"atleast2", [](TaskId a, TaskId b, TaskId c) { return Constraint::at_least(2, {a, b, c}); }};
    }
    throw ParameterError("unknown gadget '" + name + "'");
}

void check_gadget(const TernaryGadget& gadget) {
    if (!matches_ternary_condition(gadget_relation(gadget))) {
        throw ParameterError("gadget " + gadget.name +
                             " does not accept {{a,b},{c}} and {{a,c},{b}} while rejecting {{a},{b},{c}}");
    }
}

Schema mchs_to_wsp(const MchsInstance& inst, const TernaryGadget& gadget) {
    check_mchs(inst);
    check_gadget(gadget);
    const int colors = inst.colors;
    const auto m = static_cast<int>(inst.sets.size());
    if (m < 2 || colors < 2) {
        return dummy_instance(solve_mchs_bruteforce(inst));
    }
    Schema w;
    w.users = inst.vertices;
    UserSet everyone(inst.vertices.size());
    for (std::size_t v = 0; v < everyone.size(); ++v) {
        everyone[v] = static_cast<UserId>(v);
    }
    auto s_task = [](int j) { return static_cast<TaskId>(j - 1); };
    for (int j = 1; j <= colors; ++j) {
        w.tasks.push_back("s" + std::to_string(j));
        UserSet cls;
        for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
            if (inst.color_of[v] == j) {
                cls.push_back(static_cast<UserId>(v));
            }
        }
        w.auth.push_back(std::move(cls));
    }
    auto e_task = [&](int i, int j) { return static_cast<TaskId>(colors + (i - 1) * (colors - 1) + (j - 2)); };
    for (int i = 1; i <= m; ++i) {
        for (int j = 2; j <= colors; ++j) {
            w.tasks.push_back("e" + std::to_string(i) + "_" + std::to_string(j));
            w.auth.push_back(j == colors ? make_set(inst.sets[static_cast<std::size_t>(i - 1)]) : everyone);
        }
    }
    for (int i = 1; i <= m; ++i) {
        w.constraints.push_back(gadget.apply(e_task(i, 2), s_task(1), s_task(2)));
        for (int j = 3; j <= colors; ++j) {
            w.constraints.push_back(gadget.apply(e_task(i, j), e_task(i, j - 1), s_task(j)));
        }
    }
    return w;
}

bool solve_mchs_bruteforce(const MchsInstance& inst, std::uint64_t max_choices) {
    check_mchs(inst);
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(inst.colors));
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
        classes[static_cast<std::size_t>(inst.color_of[v] - 1)].push_back(static_cast<int>(v));
    }
    std::uint64_t total = 1;
    for (const auto& cls : classes) {
        total *= cls.size();
        if (total > max_choices) {
            throw ResourceError("brute-force MCHS exceeds the cap of " + std::to_string(max_choices) + " choices");
        }
    }
    std::vector<std::size_t> pick(classes.size(), 0);
    std::vector<char> chosen(inst.vertices.size());
    while (true) {
        std::fill(chosen.begin(), chosen.end(), 0);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            chosen[static_cast<std::size_t>(classes[c][pick[c]])] = 1;
        }
        const bool hits = std::all_of(inst.sets.begin(), inst.sets.end(), [&](const auto& set) {
            return std::any_of(set.begin(), set.end(), [&](int v) { return chosen[static_cast<std::size_t>(v)] != 0; });
        });
        if (hits) {
            return true;
        }
        std::size_t c = classes.size();
        while (c > 0 && pick[c - 1] + 1 == classes[c - 1].size()) {
            pick[--c] = 0;
        }
        if (c == 0) {
            return false;
        }
        ++pick[c - 1];
    }
}

Schema gen_random_instance(const RandomInstanceParams& p) {
    if (p.tasks < 0 || p.users < 0 || p.constraints < 0) {
        throw ParameterError("instance dimensions must be non-negative");
    }
    if (p.density < 0.0 || p.density > 1.0) {
        throw ParameterError("density must lie in [0, 1]");
    }
    if (p.constraints > 0 && p.kinds.empty()) {
        throw ParameterError("constraints requested but no kinds given");
    }
    if (p.max_arity < 1) {
        throw ParameterError("max_arity must be positive");
    }
    for (const auto& kt : p.kinds) {
        const bool binary = kt.kind == Kind::Eq2 || kt.kind == Kind::Neq2 || kt.kind == Kind::Bind || kt.kind == Kind::Sep;
        const int needed = binary ? 2 : 1;
        if (p.constraints > 0 && (p.tasks < needed || std::min(p.tasks, p.max_arity) < needed)) {
            throw ParameterError(std::string(kind_name(kt.kind)) + " needs at least " + std::to_string(needed) +
                                 " tasks in scope");
        }
        if (kt.kind == Kind::PerUser && kt.fixed_params.size() >= 2 && kt.fixed_params[0] > kt.fixed_params[1]) {
            throw ParameterError("PERUSER fixed bounds must satisfy t_l <= t_u");
        }
        for (int v : kt.fixed_params) {
            if (v < 1) {
                throw ParameterError("fixed parameters must be positive");
            }
        }
    }
    Rng rng(p.seed);
    Schema w;
    for (int s = 1; s <= p.tasks; ++s) {
        w.tasks.push_back("s" + std::to_string(s));
    }
    for (int u = 1; u <= p.users; ++u) {
        w.users.push_back("u" + std::to_string(u));
    }
    for (int s = 0; s < p.tasks; ++s) {
        UserSet a;
        for (int u = 0; u < p.users; ++u) {
            if (rng.chance(p.density)) {
                a.push_back(u);
            }
        }
        w.auth.push_back(std::move(a));
    }
    const int widest = std::min(p.tasks, p.max_arity);
    for (int i = 0; i < p.constraints; ++i) {
        const KindTemplate& kt = p.kinds[static_cast<std::size_t>(rng.below(static_cast<int>(p.kinds.size())))];
        switch (kt.kind) {
        case Kind::Eq2:
        case Kind::Neq2: {
            const auto pick = rng.sample(p.tasks, 2);
            w.constraints.push_back(kt.kind == Kind::Eq2 ? Constraint::eq(pick[0], pick[1])
                                                         : Constraint::neq(pick[0], pick[1]));
            break;
        }
        case Kind::Bind:
        case Kind::Sep: {
            const int arity = rng.between(2, widest);
            const auto pick = rng.sample(p.tasks, arity);
            const int split = rng.between(1, arity - 1);
            auto left = make_set({pick.begin(), pick.begin() + split});
            auto right = make_set({pick.begin() + split, pick.end()});
            w.constraints.push_back(kt.kind == Kind::Bind ? Constraint::bind(left, right)
                                                          : Constraint::sep(left, right));
            break;
        }
        case Kind::AtMost:
        case Kind::AtLeast: {
            const int arity = rng.between(1, widest);
            auto scope = make_set(rng.sample(p.tasks, arity));
            const int t = param_or(kt, 0, rng.between(1, arity));
            w.constraints.push_back(kt.kind == Kind::AtMost ? Constraint::at_most(t, scope)
                                                            : Constraint::at_least(t, scope));
            break;
        }
        case Kind::PerUser: {
            const int arity = rng.between(1, widest);
            auto scope = make_set(rng.sample(p.tasks, arity));
            const int lower = param_or(kt, 0, rng.between(1, arity));
            const int upper = param_or(kt, 1, rng.between(lower, std::max(lower, arity)));
            w.constraints.push_back(Constraint::per_user(lower, upper, scope));
            break;
        }
        }
    }
    return w;
}

CnfFormula gen_random_cnf(int num_vars, int num_clauses, int clause_width, std::uint64_t seed) {
    if (num_vars < 1 || clause_width < 1 || clause_width > num_vars || num_clauses < 0) {
        throw ParameterError("invalid random CNF dimensions");
    }
    Rng rng(seed);
    CnfFormula f{num_vars, {}};
    for (int c = 0; c < num_clauses; ++c) {
        std::vector<int> clause;
        for (int v : rng.sample(num_vars, clause_width)) {
            clause.push_back(rng.chance(0.5) ? v + 1 : -(v + 1));
        }
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

MchsInstance gen_random_mchs(int num_vertices, int colors, int num_sets, std::uint64_t seed) {
    if (colors < 1 || num_vertices < colors || num_sets < 0) {
        throw ParameterError("invalid random MCHS dimensions");
    }
    Rng rng(seed);
    MchsInstance inst;
    inst.colors = colors;
    for (int v = 0; v < num_vertices; ++v) {
        inst.vertices.push_back("v" + std::to_string(v + 1));
        inst.color_of.push_back(v < colors ? v + 1 : rng.between(1, colors));
    }
    for (int i = 0; i < num_sets; ++i) {
        std::vector<int> set;
        for (int v = 0; v < num_vertices; ++v) {
            if (rng.chance(0.3)) {
                set.push_back(v);
            }
        }
        if (set.empty()) {
            set.push_back(rng.below(num_vertices));
        }
        inst.sets.push_back(std::move(set));
    }
    return inst;
}

} // namespace wsp
