#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "wsp/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = wsp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Scratch {
public:
    Scratch() {
        dir_ = fs::temp_directory_path() /
               ("wsp_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = (dir_ / name).string();
        wsp::write_file(p, text);
        return p;
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

const std::string kWStar = fixtures::path("corpus/wstar.wsp");

} // namespace

TEST(CliSolve, WStar) {
    for (const std::string engine : {"fpt", "brute"}) {
        const auto r = run({"solve", kWStar, "--engine", engine});
        EXPECT_EQ(r.code, 0);
        EXPECT_TRUE(contains(r.out, "# satisfiable"));
        EXPECT_TRUE(contains(r.out, "s1 u1\ns2 u1\ns3 u6\n"));
    }
}

TEST(CliSolve, OutputIsAPlanFile) {
    Scratch tmp;
    const auto r = run({"solve", kWStar});
    const auto plan = tmp.write("out.plan", r.out);
    EXPECT_EQ(run({"verify", kWStar, plan}).code, 0);
    const auto file = tmp.path("again.plan");
    EXPECT_EQ(run({"solve", kWStar, "--plan-out", file}).code, 0);
    EXPECT_EQ(wsp::read_file(file), "s1 u1\ns2 u1\ns3 u6\n");
}

TEST(CliSolve, UnsatisfiableAndMalformed) {
    const auto r = run({"solve", fixtures::path("corpus/unsat_separation.wsp")});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "# unsatisfiable"));
    for (const auto& entry : fs::directory_iterator(fixtures::path("bad"))) {
        const auto bad = run({"solve", entry.path().string()});
        EXPECT_EQ(bad.code, 2) << entry.path();
        EXPECT_TRUE(contains(bad.err, "line ")) << bad.err;
    }
    EXPECT_EQ(run({"solve", "/nonexistent.wsp"}).code, 2);
    EXPECT_EQ(run({"solve", kWStar, "--engine", "magic"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(CliSolve, EnginesAgreeOnCorpus) {
    for (const auto& entry : fs::directory_iterator(fixtures::path("corpus"))) {
        const auto a = run({"solve", entry.path().string(), "--engine", "fpt"});
        const auto b = run({"solve", entry.path().string(), "--engine", "brute"});
        EXPECT_EQ(a.code, b.code) << entry.path();
        EXPECT_NE(a.code, 2) << entry.path() << a.err;
    }
}

TEST(CliSolve, TaskCap) {
    const auto r = run({"solve", kWStar, "--max-tasks", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(CliKernelize, WStarCounts) {
    const auto r = run({"kernelize", kWStar});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "k: 3 → 2"));
    EXPECT_TRUE(contains(r.out, "n: 6 → 2"));
    EXPECT_TRUE(contains(r.out, "m: 3 → 1"));
    EXPECT_TRUE(contains(r.out, "verdict: reduced"));
}

TEST(CliKernelize, Idempotent) {
    Scratch tmp;
    const auto once = tmp.path("once.wsp");
    const auto twice = tmp.path("twice.wsp");
    ASSERT_EQ(run({"kernelize", kWStar, "--out", once}).code, 0);
    ASSERT_EQ(run({"kernelize", once, "--out", twice}).code, 0);
    EXPECT_EQ(wsp::parse_instance(wsp::read_file(once)), wsp::parse_instance(wsp::read_file(twice)));
}

TEST(CliKernelize, RejectsIrregularConstraints) {
    const auto r = run({"kernelize", fixtures::path("corpus/binding_gadget.wsp")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "not intersection-closed")) << r.err;
    // PERUSER 2 2 over three tasks has no eligible partition at all.
    EXPECT_EQ(run({"kernelize", fixtures::path("corpus/unsat_counting.wsp")}).code, 1);
}

TEST(CliKernelize, TriviallyUnsat) {
    Scratch tmp;
    const auto inst = tmp.write("u.wsp", "tasks: a b\nusers: u1 u2\nauth a: u1\nconstraint EQ2: a b\n");
    const auto r = run({"kernelize", inst});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "trivially unsatisfiable"));
}

TEST(CliPipeline, KernelizeSolveLiftVerify) {
    Scratch tmp;
    for (const std::string name : {"wstar", "chain", "cardinality", "hard_tasks"}) {
        const auto inst = fixtures::path("corpus/" + name + ".wsp");
        const auto reduced = tmp.path(name + ".red.wsp");
        const auto log = tmp.path(name + ".log");
        const auto small_plan = tmp.path(name + ".red.plan");
        const auto lifted = tmp.path(name + ".plan");
        ASSERT_EQ(run({"kernelize", inst, "--out", reduced, "--log", log}).code, 0) << name;
        ASSERT_EQ(run({"solve", reduced, "--plan-out", small_plan}).code, 0) << name;
        const auto l = run({"lift", "--instance", inst, "--log", log, "--plan", small_plan, "--out", lifted});
        ASSERT_EQ(l.code, 0) << name << l.err;
        const auto v = run({"verify", inst, lifted});
        EXPECT_EQ(v.code, 0) << name << v.out;
        EXPECT_EQ(v.out, "valid\n");
    }
}

TEST(CliLift, RejectsUnsatLog) {
    Scratch tmp;
    const auto inst = tmp.write("u.wsp", "tasks: a b\nusers: u1 u2\nauth a: u1\nconstraint EQ2: a b\n");
    const auto log = tmp.path("u.log");
    EXPECT_EQ(run({"kernelize", inst, "--log", log}).code, 1);
    const auto plan = tmp.write("empty.plan", "");
    EXPECT_EQ(run({"lift", "--instance", inst, "--log", log, "--plan", plan}).code, 2);
}

TEST(CliClassify, BindOneTwo) {
    const auto r = run({"classify", "--kind", "BIND", "--params", "1,2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "arity: 3"));
    EXPECT_TRUE(contains(r.out, "eligible partitions: {1,2,3} {1,2}|{3} {1,3}|{2}"));
    EXPECT_TRUE(contains(r.out, "regular: yes"));
    EXPECT_TRUE(contains(r.out, "intersection-closed: no"));
    EXPECT_TRUE(contains(r.out, "ternary condition: yes"));
}

TEST(CliClassify, NeqIsWellBehaved) {
    const auto r = run({"classify", "--kind", "NEQ2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "arity: 2"));
    EXPECT_TRUE(contains(r.out, "regular: yes"));
    EXPECT_TRUE(contains(r.out, "intersection-closed: yes"));
}

TEST(CliClassify, RelationFile) {
    const auto r = run({"classify", fixtures::path("bind_pairs.rel")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "arity: 4"));
    EXPECT_TRUE(contains(r.out, "regular: no ({1}|{2}|{3}|{4})"));
}

TEST(CliClassify, Tuples) {
    const auto r = run({"classify", "--tuples", fixtures::path("neq.tuples")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "user-independent: yes"));
    Scratch tmp;
    const auto odd = tmp.write("odd.tuples", "arity: 2\nuniverse: 4\n1 2\n");
    const auto o = run({"classify", "--tuples", odd});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(contains(o.out, "user-independent: no ((1,2) present, (1,3) absent)")) << o.out;
}

TEST(CliClassify, ArityCap) {
    Scratch tmp;
    std::string text = "9\n{1,2,3,4,5,6,7,8,9}\n";
    const auto big = tmp.write("big.rel", text);
    EXPECT_EQ(run({"classify", big}).code, 2);
    EXPECT_EQ(run({"classify", big, "--max-arity", "9"}).code, 0);
    EXPECT_EQ(run({"classify", "--kind", "ATMOST", "--params", "2", "--arity", "9"}).code, 2);
    EXPECT_EQ(run({"classify"}).code, 2);
    EXPECT_EQ(run({"classify", "--kind", "NOPE"}).code, 2);
}

TEST(CliReduce, Sat) {
    Scratch tmp;
    const auto out = tmp.path("sat.wsp");
    const auto r = run({"reduce", "--from", "sat", fixtures::path("small.cnf"), "--out", out});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto s = wsp::parse_instance(wsp::read_file(out));
    EXPECT_EQ(s.num_tasks(), 5U);
    EXPECT_EQ(s.num_users(), 2U);
    EXPECT_EQ(run({"solve", out}).code, 0);
}

TEST(CliReduce, Mchs) {
    Scratch tmp;
    const auto inst = tmp.write("m.mchs",
                                "vertices: a b c d e f\ncolors: 3\n"
                                "color a: 1\ncolor b: 1\ncolor c: 2\ncolor d: 2\ncolor e: 3\ncolor f: 3\n"
                                "set: a c\nset: b e\nset: d f\nset: a f\n");
    for (const std::string gadget : {"bind", "atmost", "BIND"}) {
        const auto r = run({"reduce", "--from", "mchs", inst, "--gadget", gadget});
        EXPECT_EQ(r.code, 0) << r.err;
        const auto s = wsp::parse_instance(r.out);
        EXPECT_EQ(s.num_tasks(), 11U);
        EXPECT_EQ(s.num_constraints(), 8U);
    }
    const auto neq = run({"reduce", "--from", "mchs", inst, "--gadget", "NEQ2"});
    EXPECT_EQ(neq.code, 2);
    EXPECT_FALSE(neq.err.empty());
    EXPECT_EQ(run({"reduce", "--from", "dimacs", inst}).code, 2);
}

TEST(CliVerify, Examples) {
    Scratch tmp;
    const auto bad = tmp.write("bad.plan", "s1 u1\ns2 u1\ns3 u1\n");
    const auto r = run({"verify", kWStar, bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "invalid\n"));
    EXPECT_TRUE(contains(r.out, "violation (constraint)"));

    const auto partial = tmp.write("partial.plan", "s1 u1\ns2 u1\n");
    const auto p = run({"verify", kWStar, partial});
    EXPECT_EQ(p.code, 1);
    EXPECT_TRUE(contains(p.out, "violation (incomplete)")) << p.out;

    const auto unauth = tmp.write("unauth.plan", "s1 u6\ns2 u6\ns3 u1\n");
    const auto u = run({"verify", kWStar, unauth});
    EXPECT_EQ(u.code, 1);
    EXPECT_TRUE(contains(u.out, "violation (unauthorized)")) << u.out;

    const auto unknown = tmp.write("unknown.plan", "s1 zed\n");
    EXPECT_EQ(run({"verify", kWStar, unknown}).code, 2);
}

TEST(CliGen, DeterministicAndParsable) {
    const std::vector<std::string> args = {"gen", "--seed", "7", "instance", "--tasks", "5", "--users", "4",
                                           "--constraints", "3", "--kinds", "NEQ2,PERUSER:1"};
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto s = wsp::parse_instance(a.out);
    EXPECT_EQ(s.num_tasks(), 5U);
    EXPECT_EQ(s.num_constraints(), 3U);

    const auto cnf = run({"gen", "--seed", "3", "cnf", "--vars", "4", "--clauses", "6"});
    EXPECT_EQ(cnf.code, 0) << cnf.err;
    EXPECT_EQ(wsp::parse_dimacs(cnf.out).clauses.size(), 6U);

    const auto mchs = run({"gen", "--seed", "3", "mchs", "--vertices", "6", "--colors", "2", "--sets", "3"});
    EXPECT_EQ(mchs.code, 0) << mchs.err;
    EXPECT_EQ(wsp::parse_mchs(mchs.out).sets.size(), 3U);

    EXPECT_EQ(run({"gen", "instance", "--kinds", "BOGUS"}).code, 2);
}
