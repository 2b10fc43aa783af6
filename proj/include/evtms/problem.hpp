#ifndef EVTMS_PROBLEM_HPP
#define EVTMS_PROBLEM_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evtms/evidence.hpp"

namespace evtms {

struct SourceSpan {
    int line = 0;  // 1-based
    int column = 0;
};

/// A ground proposition: either a plain term "(x on)" or a comparison
/// "(Q1 > Q2)" between two identifiers.
struct Prop {
    std::vector<std::string> parts;
    char relation = 0;  // 0 for plain terms, else '<', '=' or '>'

    std::string text() const;
    friend bool operator==(const Prop&, const Prop&) = default;
};

struct OneOfStmt {
    std::vector<Prop> members;
    friend bool operator==(const OneOfStmt&, const OneOfStmt&) = default;
};
struct EvidenceStmt {
    Prop prop;
    SupportPair pair;
    friend bool operator==(const EvidenceStmt&, const EvidenceStmt&) = default;
};
struct RuleStmt {
    Prop head;
    std::vector<Prop> body;
    SupportPair strength;
    friend bool operator==(const RuleStmt&, const RuleStmt&) = default;
};
struct BicondStmt {
    std::vector<Prop> body;
    Prop head;
    friend bool operator==(const BicondStmt&, const BicondStmt&) = default;
};

struct Statement {
    std::variant<OneOfStmt, EvidenceStmt, RuleStmt, BicondStmt> value;
    SourceSpan span;
};

struct ProblemAst {
    std::vector<Statement> statements;
    std::vector<std::string> warnings;

    /// Structural equality, ignoring spans and warnings.
    bool same_structure(const ProblemAst& other) const;
};

/// Grammar:
///   program := stmt*
///   stmt    := oneof | evidence | rule | bicond
///   oneof   := "(" "one-of" prop+ ")"
///   evidence:= prop ":" pair
///   rule    := prop ":-" conj ":" pair
///   bicond  := conj "<->" prop
///   conj    := prop ("&" prop)*
///   prop    := "(" ident+ ")" | "(" ident ("<"|"="|">") ident ")"
///   pair    := "[" num "," num "]"
/// Numbers accept "0.5", ".5" and fractions "1/4"; "%" comments run to end
/// of line; whitespace is insignificant.  Support pairs are validated while
/// parsing (both values in [0,1], lower <= upper), as is duplicate one-of
/// membership.  Throws ParseError with line:column and expected-token sets.
ProblemAst parse_problem(std::string_view text);

/// Canonical rendering; parse_problem(pretty_print(ast)) is structurally
/// identical to ast.
std::string pretty_print(const ProblemAst& ast);

struct CompiledProblem {
    Database db;
    /// One-ofs whose members appear as biconditional heads (solve's default
    /// enumeration scope), ascending.
    std::vector<DisjunctionId> head_disjunctions;
    std::vector<std::string> warnings;
};

/// Maps an AST onto a database.  One-of statements are processed first (the
/// figure-style layout declares ordering frames after the equivalences that
/// use them); everything else follows in statement order, so compilation is
/// deterministic.  One-ofs become fresh plain hypothesis assumptions (mass 1)
/// under declare_one_of; evidence becomes tagged assumptions; rules become
/// strength-carrying justification pairs.  A biconditional c1 & ... & ck <-> h
/// requires every ci to belong to a one-of and h to belong to a two-member
/// one-of {h, h'}; it installs the plain justification {c1..ck} -> h plus, for
/// every conjunct ci and every one-of sibling m of ci, the plain justification
/// {m} -> h' (a falsified conjunct forces the opposite state, valid because
/// one-ofs are exhaustive).  The reverse implication is deliberately not
/// compiled.  Throws CompileError naming the offending statement.
CompiledProblem compile(const ProblemAst& ast);

}  // namespace evtms

#endif
