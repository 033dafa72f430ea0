#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wsp/classify.hpp"
#include "wsp/constraints.hpp"
#include "wsp/error.hpp"
#include "wsp/io.hpp"
#include "wsp/kernel.hpp"
#include "wsp/reductions.hpp"
#include "wsp/solver.hpp"

namespace wsp::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

std::string set_text(PositionSet s) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if ((s >> i) & 1U) {
            out += (first ? "" : ",") + std::to_string(i + 1);
            first = false;
        }
    }
    return out + '}';
}

std::string partition_text(const PositionPartition& p) {
    std::string text = serialize_relation(RelationSpec(static_cast<int>(p.size()), {p}, 32));
    text = text.substr(text.find('\n') + 1);
    text.pop_back();
    return text;
}

Schema load_instance(const std::string& path, std::ostream& err) {
    Schema s = parse_instance(read_file(path));
    const auto report = validate_schema(s);
    for (const auto& w : report.warnings) {
        err << "warning: " << w << '\n';
    }
    if (!report.ok()) {
        throw ParseError(path + ": " + report.errors.front());
    }
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, sep);) {
        out.push_back(item);
    }
    return out;
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split(s, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw ParameterError("expected comma-separated integers, got '" + s + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string instance;
    std::string engine = "fpt";
    std::string plan_out;
    int max_tasks = FptOptions{}.max_tasks;
    std::uint64_t max_plans = BruteForceOptions{}.max_plans;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const Schema s = load_instance(a.instance, err);
    const SolveOutcome r = a.engine == "brute" ? solve_bruteforce(s, {a.max_plans}) : solve_fpt(s, {a.max_tasks});
    out << "# " << (r.satisfiable() ? "satisfiable" : "unsatisfiable") << '\n';
    if (a.engine == "brute") {
        out << "# engine: brute, plans examined: " << r.stats.plans_examined << '\n';
    } else {
        out << "# engine: fpt, partitions examined: " << r.stats.partitions_examined
            << ", matchings attempted: " << r.stats.matchings_attempted << '\n';
    }
    if (!r.satisfiable()) {
        return kNo;
    }
    const std::string plan = serialize_plan(s, *r.plan);
    out << plan;
    if (!a.plan_out.empty()) {
        write_file(a.plan_out, plan);
    }
    return kOk;
}

// ------------------------------------------------------------ kernelize

struct KernelizeArgs {
    std::string instance;
    std::string out;
    std::string log;
};

int cmd_kernelize(const KernelizeArgs& a, std::ostream& out, std::ostream& err) {
    const Schema s = load_instance(a.instance, err);
    KernelResult r;
    try {
        r = kernelize(s);
    } catch (const ClassificationError& e) {
        err << "error: cannot kernelize: " << e.what() << '\n';
        return kError;
    }
    out << "k: " << s.num_tasks() << " → " << r.reduced.num_tasks() << '\n';
    out << "n: " << s.num_users() << " → " << r.reduced.num_users() << '\n';
    out << "m: " << s.num_constraints() << " → " << r.reduced.num_constraints() << '\n';
    out << "merges: " << r.merges.size() << ", hard tasks: " << r.hard.size() << '\n';
    if (!a.out.empty()) {
        write_file(a.out, serialize_instance(r.reduced));
    }
    if (!a.log.empty()) {
        write_file(a.log, serialize_kernel_log(kernel_log_of(r)));
    }
    if (r.verdict == KernelVerdict::TriviallyUnsat) {
        out << "verdict: trivially unsatisfiable (" << r.reason << ")\n";
        return kNo;
    }
    out << "verdict: reduced\n";
    return kOk;
}

// ------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string spec;
    std::string kind;
    std::string params;
    std::string tuples;
    int arity = 0;
    int max_arity = kDefaultMaxArity;
};

RelationSpec relation_from_kind(const ClassifyArgs& a, std::ostream& out) {
    const auto kind = parse_kind(a.kind);
    if (!kind) {
        throw ParameterError("unknown kind '" + a.kind + "'");
    }
    const std::vector<int> params = a.params.empty() ? std::vector<int>{} : int_list(a.params);
    auto tasks = [](int from, int count) {
        std::vector<TaskId> t(static_cast<std::size_t>(std::max(count, 0)));
        for (int i = 0; i < count; ++i) {
            t[static_cast<std::size_t>(i)] = from + i;
        }
        return t;
    };
    auto need = [&](std::size_t count, const char* what) {
        if (params.size() != count) {
            throw ParameterError(std::string(kind_name(*kind)) + " expects --params " + what);
        }
    };
    auto width = [&] {
        const int r = a.arity > 0 ? a.arity : 3;
        if (r > a.max_arity) {
            throw ParameterError("arity " + std::to_string(r) + " exceeds the cap " + std::to_string(a.max_arity));
        }
        return r;
    };
    Constraint c;
    switch (*kind) {
    case Kind::Eq2:
        need(0, "(none)");
        c = Constraint::eq(0, 1);
        break;
    case Kind::Neq2:
        need(0, "(none)");
        c = Constraint::neq(0, 1);
        break;
    case Kind::Bind:
    case Kind::Sep:
        need(2, "<left size>,<right size>");
        if (params[0] < 1 || params[1] < 1) {
            throw ParameterError("both sides need at least one task");
        }
        if (params[0] + params[1] > a.max_arity) {
            throw ParameterError("arity " + std::to_string(params[0] + params[1]) + " exceeds the cap " +
                                 std::to_string(a.max_arity));
        }
        c = *kind == Kind::Bind ? Constraint::bind(tasks(0, params[0]), tasks(params[0], params[1]))
                                : Constraint::sep(tasks(0, params[0]), tasks(params[0], params[1]));
        break;
    case Kind::AtMost:
    case Kind::AtLeast:
        need(1, "<t>");
        c = *kind == Kind::AtMost ? Constraint::at_most(params[0], tasks(0, width()))
                                  : Constraint::at_least(params[0], tasks(0, width()));
        break;
    case Kind::PerUser:
        need(2, "<t_l>,<t_u>");
        c = Constraint::per_user(params[0], params[1], tasks(0, width()));
        break;
    }
    try {
        check_constraint(c);
    } catch (const DomainError& e) {
        throw ParameterError(e.what());
    }
    const Classification meta = classify_constraint(c);
    out << "catalog metadata: regular " << (meta.regular ? "yes" : "no") << ", intersection-closed "
        << (meta.intersection_closed ? "yes" : "no") << '\n';
    return relation_of(c, a.max_arity);
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream&) {
    const int sources = !a.spec.empty() + !a.kind.empty() + !a.tuples.empty();
    if (sources != 1) {
        throw ParameterError("give exactly one of a relation file, --kind or --tuples");
    }
    std::optional<RelationSpec> spec;
    if (!a.tuples.empty()) {
        const TupleTable table = parse_tuple_table(read_file(a.tuples));
        if (table.arity > a.max_arity) {
            throw ParameterError("arity " + std::to_string(table.arity) + " exceeds the cap " +
                                 std::to_string(a.max_arity));
        }
        const IndependenceVerdict v = is_user_independent(table);
        if (!v.independent) {
            auto tuple = [](const std::vector<int>& t) {
                std::string s = "(";
                for (std::size_t i = 0; i < t.size(); ++i) {
                    s += (i ? "," : "") + std::to_string(t[i]);
                }
                return s + ')';
            };
            out << "arity: " << table.arity << '\n';
            out << "user-independent: no (" << tuple(v.witness->first) << " present, " << tuple(v.witness->second)
                << " absent)\n";
            return kOk;
        }
        spec = *v.spec;
    } else if (!a.kind.empty()) {
        spec = relation_from_kind(a, out);
    } else {
        spec = parse_relation(read_file(a.spec), a.max_arity);
    }
    out << "arity: " << spec->arity() << '\n';
    out << "eligible partitions:";
    for (const auto& p : spec->eligible()) {
        out << ' ' << partition_text(p);
    }
    out << '\n';
    out << "eligible sets:";
    for (PositionSet s : eligible_sets(*spec)) {
        out << ' ' << set_text(s);
    }
    out << '\n';
    out << "user-independent: yes\n";
    const RegularityVerdict reg = is_regular(*spec);
    if (reg.regular) {
        out << "regular: yes\n";
        const ClosureVerdict cl = is_intersection_closed(*spec);
        if (cl.closed) {
            out << "intersection-closed: yes\n";
        } else {
            out << "intersection-closed: no (" << set_text(cl.witness->first) << " and "
                << set_text(cl.witness->second) << ")\n";
        }
    } else {
        out << "regular: no (" << partition_text(*reg.counterexample) << ")\n";
        out << "intersection-closed: n/a (not regular)\n";
    }
    if (spec->arity() == 3) {
        out << "ternary condition: " << (matches_ternary_condition(*spec) ? "yes" : "no") << '\n';
    } else {
        out << "ternary condition: n/a (arity " << spec->arity() << ")\n";
    }
    return kOk;
}

// --------------------------------------------------------------- reduce

struct ReduceArgs {
    std::string from;
    std::string input;
    std::string gadget = "bind";
    std::string out;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out, std::ostream& err) {
    Schema w;
    std::vector<std::string> report;
    if (a.from == "sat") {
        const CnfFormula f = parse_dimacs(read_file(a.input));
        w = sat_to_wsp(f);
        report.push_back("reduce --from sat " + a.input);
        report.push_back("source: " + std::to_string(f.num_vars) + " variables, " + std::to_string(f.clauses.size()) +
                         " clauses");
    } else {
        const MchsInstance inst = parse_mchs(read_file(a.input));
        const TernaryGadget gadget = gadget_by_name(lower(a.gadget));
        try {
            check_gadget(gadget);
        } catch (const ParameterError& e) {
            err << "error: " << e.what() << '\n';
            return kError;
        }
        w = mchs_to_wsp(inst, gadget);
        report.push_back("reduce --from mchs --gadget " + gadget.name + ' ' + a.input);
        report.push_back("source: " + std::to_string(inst.vertices.size()) + " vertices, " +
                         std::to_string(inst.colors) + " colors, " + std::to_string(inst.sets.size()) + " sets");
        if (inst.sets.size() < 2 || inst.colors < 2) {
            report.push_back("trivial source solved directly; output is a one-task placeholder");
        }
    }
    report.push_back("k: " + std::to_string(w.num_tasks()));
    report.push_back("n: " + std::to_string(w.num_users()));
    report.push_back("m: " + std::to_string(w.num_constraints()));
    const std::string doc = serialize_instance(w, report);
    if (a.out.empty()) {
        out << doc;
    } else {
        write_file(a.out, doc);
        for (const auto& line : report) {
            out << line << '\n';
        }
    }
    return kOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
    std::string instance;
    std::string plan;
};

int report_plan(const Schema& s, const Plan& plan, std::ostream& out) {
    const PlanVerdict v = is_valid_plan(s, plan);
    if (v.valid) {
        out << "valid\n";
        return kOk;
    }
    out << "invalid\n";
    for (const auto& violation : v.violations) {
        const char* kind = violation.kind == ViolationKind::Incomplete     ? "incomplete"
                           : violation.kind == ViolationKind::Unauthorized ? "unauthorized"
                                                                           : "constraint";
        out << "violation (" << kind << "): " << violation.message << '\n';
    }
    return kNo;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    const Schema s = load_instance(a.instance, err);
    const Plan plan = parse_plan(s, read_file(a.plan));
    return report_plan(s, plan, out);
}

// ----------------------------------------------------------------- lift

struct LiftArgs {
    std::string instance;
    std::string log;
    std::string plan;
    std::string out;
};

int cmd_lift(const LiftArgs& a, std::ostream& out, std::ostream& err) {
    const Schema s = load_instance(a.instance, err);
    const KernelLog log = parse_kernel_log(read_file(a.log));
    if (log.verdict == KernelVerdict::TriviallyUnsat) {
        err << "error: the kernel log records an unsatisfiable instance; nothing to lift\n";
        return kError;
    }
    const auto lifted = lift_assignment(log.merges, parse_assignment(read_file(a.plan)));
    const Plan plan = plan_from_names(s, lifted);
    const std::string text = serialize_plan(s, plan);
    if (!a.out.empty()) {
        write_file(a.out, text);
    }
    const int code = report_plan(s, plan, out);
    out << text;
    return code;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
    std::string what;
    std::uint64_t seed = 1;
    std::string out;
    RandomInstanceParams instance;
    std::string kinds = "EQ2,NEQ2,BIND,SEP,ATMOST,ATLEAST,PERUSER";
    int vars = 3;
    int clauses = 5;
    int width = 3;
    int vertices = 6;
    int colors = 2;
    int sets = 3;
};

std::vector<KindTemplate> parse_templates(const std::string& spec) {
    std::vector<KindTemplate> out;
    for (const auto& item : split(spec, ',')) {
        const auto parts = split(item, ':');
        const auto kind = parts.empty() ? std::nullopt : parse_kind(parts[0]);
        if (!kind) {
            throw ParameterError("unknown kind '" + item + "'");
        }
        KindTemplate t{*kind, {}};
        for (std::size_t i = 1; i < parts.size(); ++i) {
            t.fixed_params.push_back(int_list(parts[i]).at(0));
        }
        out.push_back(std::move(t));
    }
    return out;
}

int cmd_gen(GenArgs a, std::ostream& out) {
    std::ostringstream header;
    std::string doc;
    if (a.what == "instance") {
        a.instance.seed = a.seed;
        a.instance.kinds = parse_templates(a.kinds);
        header << "gen instance --seed " << a.seed << " --tasks " << a.instance.tasks << " --users "
               << a.instance.users << " --constraints " << a.instance.constraints << " --kinds " << a.kinds
               << " --density " << a.instance.density << " --max-arity " << a.instance.max_arity;
        doc = serialize_instance(gen_random_instance(a.instance), {header.str()});
    } else if (a.what == "cnf") {
        header << "gen cnf --seed " << a.seed << " --vars " << a.vars << " --clauses " << a.clauses << " --width "
               << a.width;
        doc = serialize_dimacs(gen_random_cnf(a.vars, a.clauses, a.width, a.seed), {header.str()});
    } else {
        header << "gen mchs --seed " << a.seed << " --vertices " << a.vertices << " --colors " << a.colors
               << " --sets " << a.sets;
        doc = serialize_mchs(gen_random_mchs(a.vertices, a.colors, a.sets, a.seed), {header.str()});
    }
    if (a.out.empty()) {
        out << doc;
    } else {
        write_file(a.out, doc);
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Workflow satisfiability toolkit", "wsp"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* sub_solve = app.add_subcommand("solve", "Decide an instance and print a valid plan if one exists");
    sub_solve->add_option("instance", solve.instance, "Instance document")->required();
    sub_solve->add_option("--engine", solve.engine, "fpt or brute")->check(CLI::IsMember({"fpt", "brute"}));
    sub_solve->add_option("--plan-out", solve.plan_out, "Write the plan to this file");
    sub_solve->add_option("--max-tasks", solve.max_tasks, "Task cap of the fpt engine");
    sub_solve->add_option("--max-plans", solve.max_plans, "Plan cap of the brute engine");

    KernelizeArgs kern;
    auto* sub_kern = app.add_subcommand("kernelize", "Reduce a regular, intersection-closed instance");
    sub_kern->add_option("instance", kern.instance, "Instance document")->required();
    sub_kern->add_option("--out", kern.out, "Write the reduced instance here");
    sub_kern->add_option("--log", kern.log, "Write the kernel log here");

    ClassifyArgs cls;
    auto* sub_cls = app.add_subcommand("classify", "Classify a relation");
    sub_cls->add_option("spec", cls.spec, "Relation file (arity line, then eligible partitions)");
    sub_cls->add_option("--kind", cls.kind, "Catalog kind, e.g. BIND");
    sub_cls->add_option("--params", cls.params,
                        "Comma-separated parameters: side sizes for BIND/SEP, t for ATMOST/ATLEAST, t_l,t_u for PERUSER");
    sub_cls->add_option("--arity", cls.arity, "Scope size for ATMOST, ATLEAST and PERUSER (default 3)");
    sub_cls->add_option("--tuples", cls.tuples, "Tuple table file");
    sub_cls->add_option("--max-arity", cls.max_arity, "Arity cap");

    ReduceArgs red;
    auto* sub_red = app.add_subcommand("reduce", "Build a WSP instance from a SAT or MCHS instance");
    sub_red->add_option("--from", red.from, "sat or mchs")->required()->check(CLI::IsMember({"sat", "mchs"}));
    sub_red->add_option("input", red.input, "DIMACS or MCHS file")->required();
    sub_red->add_option("--gadget", red.gadget, "Ternary gadget for mchs: bind or atmost");
    sub_red->add_option("--out", red.out, "Write the instance here");

    VerifyArgs ver;
    auto* sub_ver = app.add_subcommand("verify", "Check that a plan is complete, authorized and eligible");
    sub_ver->add_option("instance", ver.instance, "Instance document")->required();
    sub_ver->add_option("plan", ver.plan, "Plan file")->required();

    LiftArgs lift;
    auto* sub_lift = app.add_subcommand("lift", "Turn a plan of a kernelized instance into one of the original");
    sub_lift->add_option("--instance", lift.instance, "Original instance")->required();
    sub_lift->add_option("--log", lift.log, "Kernel log")->required();
    sub_lift->add_option("--plan", lift.plan, "Plan of the reduced instance")->required();
    sub_lift->add_option("--out", lift.out, "Write the lifted plan here");

    GenArgs gen;
    auto* sub_gen = app.add_subcommand("gen", "Generate random instances");
    sub_gen->require_subcommand(1);
    sub_gen->add_option("--seed", gen.seed, "Random seed");
    sub_gen->add_option("--out", gen.out, "Output file");
    auto* gen_inst = sub_gen->add_subcommand("instance", "Random WSP instance");
    gen_inst->add_option("--tasks", gen.instance.tasks);
    gen_inst->add_option("--users", gen.instance.users);
    gen_inst->add_option("--constraints", gen.instance.constraints);
    gen_inst->add_option("--kinds", gen.kinds, "Comma-separated kinds; KIND:p fixes leading parameters");
    gen_inst->add_option("--density", gen.instance.density);
    gen_inst->add_option("--max-arity", gen.instance.max_arity);
    auto* gen_cnf = sub_gen->add_subcommand("cnf", "Random CNF formula");
    gen_cnf->add_option("--vars", gen.vars);
    gen_cnf->add_option("--clauses", gen.clauses);
    gen_cnf->add_option("--width", gen.width);
    auto* gen_mchs = sub_gen->add_subcommand("mchs", "Random multi-colored hitting set instance");
    gen_mchs->add_option("--vertices", gen.vertices);
    gen_mchs->add_option("--colors", gen.colors);
    gen_mchs->add_option("--sets", gen.sets);
    for (auto* g : {gen_inst, gen_cnf, gen_mchs}) {
        g->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kError;
    }

    try {
        if (sub_solve->parsed()) {
            return cmd_solve(solve, out, err);
        }
        if (sub_kern->parsed()) {
            return cmd_kernelize(kern, out, err);
        }
        if (sub_cls->parsed()) {
            return cmd_classify(cls, out, err);
        }
        if (sub_red->parsed()) {
            return cmd_reduce(red, out, err);
        }
        if (sub_ver->parsed()) {
            return cmd_verify(ver, out, err);
        }
        if (sub_lift->parsed()) {
            return cmd_lift(lift, out, err);
        }
        gen.what = gen_inst->parsed() ? "instance" : gen_cnf->parsed() ? "cnf" : "mchs";
        return cmd_gen(gen, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

} // namespace wsp::cli
