#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wsp/core.hpp"

namespace wsp {

/// CNF formula over variables 1..num_vars; literal -v is the negation of v.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

/// Throws ParameterError on empty clauses or out-of-range literals.
void check_formula(const CnfFormula& f);

/// Two users t and f; tasks d, then s_i and its complement per variable;
/// AtLeast(2) on each complementary pair and on every clause plus d.
/// d is authorized for f only.
Schema sat_to_wsp(const CnfFormula& f);

/// Exhaustive assignment check. Throws ResourceError above max_vars.
bool solve_sat_bruteforce(const CnfFormula& f, int max_vars = 20);

/// Multi-colored hitting set instance. Colors are 1..colors.
struct MchsInstance {
    std::vector<std::string> vertices;
    int colors = 0;
    std::vector<int> color_of;            // per vertex
    std::vector<std::vector<int>> sets;   // vertex indices
};

/// Throws ParameterError unless every set lies in V, every color lies in
/// [1, colors], every color class is nonempty and, when there are at
/// least two sets, colors <= number of sets.
void check_mchs(const MchsInstance& inst);

/// Ternary relation R(a, b, c) used by mchs_to_wsp.
struct TernaryGadget {
    std::string name;
    std::function<Constraint(TaskId, TaskId, TaskId)> apply;
};

TernaryGadget bind_gadget();     // (=, {a}, {b, c})
TernaryGadget at_most_gadget();  // (<= 2, {a, b, c})

/// Looks up a gadget by name: bind, atmost, neq2, sep, atleast2.
/// Throws ParameterError for unknown names. Only the first two satisfy
/// the ternary condition; the others exist to be rejected.
TernaryGadget gadget_by_name(const std::string& name);

/// Throws ParameterError unless the gadget's relation meets the ternary
/// condition.
void check_gadget(const TernaryGadget& gadget);

/// Users are the vertices. Tasks s_1..s_l (authorized for their color
/// class) come first, then e_{i,2..l} per set, with e_{i,l} authorized for
/// E_i. Constraints R(e_{i,2}, s_1, s_2) and R(e_{i,j}, e_{i,j-1}, s_j).
/// With fewer than two sets or a single color, the instance is solved
/// directly and a one-task dummy schema with the same answer is returned.
Schema mchs_to_wsp(const MchsInstance& inst, const TernaryGadget& gadget);

/// Tries every choice of one vertex per color. Throws ResourceError if the
/// number of choices exceeds `max_choices`.
bool solve_mchs_bruteforce(const MchsInstance& inst, std::uint64_t max_choices = 1'000'000);

/// Constraint family to sample from. `fixed_params` pins a prefix of the
/// kind's parameters (e.g. PerUser {1} fixes t_l = 1); the rest is drawn.
struct KindTemplate {
    Kind kind;
    std::vector<int> fixed_params;
};

struct RandomInstanceParams {
    int tasks = 4;
    int users = 6;
    int constraints = 3;
    std::vector<KindTemplate> kinds;
    std::uint64_t seed = 1;
    double density = 0.5;  // probability that a user is authorized for a task
    int max_arity = 4;     // cap on scope size of set-valued kinds
};

/// Deterministic in all parameters, seed included. Throws ParameterError
/// for impossible requests (e.g. a binary kind with fewer than two tasks).
Schema gen_random_instance(const RandomInstanceParams& params);

/// Uniform random formula with `clause_width` distinct variables per clause.
CnfFormula gen_random_cnf(int num_vars, int num_clauses, int clause_width, std::uint64_t seed);

/// Random MCHS instance: every color class nonempty, sets nonempty.
MchsInstance gen_random_mchs(int num_vertices, int colors, int num_sets, std::uint64_t seed);

} // namespace wsp
