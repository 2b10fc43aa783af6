#include "evtms/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evtms/oracle_model.hpp"
#include "evtms/problem.hpp"

namespace evtms {

namespace {

using json = nlohmann::ordered_json;

struct CliError {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{2, "cannot read file: " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CompiledProblem load(const std::string& path, std::ostream& err) {
    std::string text = read_file(path);
    ProblemAst ast;
    try {
        ast = parse_problem(text);
    } catch (const ParseError& e) {
        throw CliError{1, path + ":" + e.what()};
    }
    CompiledProblem problem;
    try {
        problem = compile(ast);
    } catch (const CompileError& e) {
        throw CliError{1, path + ": " + e.what()};
    }
    for (const auto& w : problem.warnings) err << "warning: " << path << ":" << w << "\n";
    return problem;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t next = std::min({row[j] + 1, row[j - 1] + 1,
                                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = row[j];
            row[j] = next;
        }
    }
    return row[b.size()];
}

std::string suggest(std::string_view wanted, const std::vector<std::string>& candidates) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& c : candidates) scored.emplace_back(edit_distance(wanted, c), c);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (std::size_t i = 0; i < scored.size() && i < 3; ++i) {
        if (i) out += ", ";
        out += scored[i].second;
    }
    return out;
}

NodeId resolve_prop(const Database& db, const std::string& name) {
    if (auto n = db.core().find_node(name)) return *n;
    std::vector<std::string> props;
    for (const auto& n : db.core().nodes()) {
        if (!n.datum.empty() && n.datum.front() == '(') props.push_back(n.datum);
    }
    std::string hint = props.empty() ? "" : "; did you mean: " + suggest(name, props);
    throw CliError{1, "unknown proposition: " + name + hint};
}

AssumptionId resolve_assumption(const Database& db, const std::string& name) {
    if (auto a = db.find_assumption(name)) return *a;
    std::vector<std::string> names;
    for (const auto& a : db.core().assumptions()) names.push_back(a.name);
    std::string hint = names.empty() ? "" : "; did you mean: " + suggest(name, names);
    throw CliError{1, "unknown assumption: " + name + hint};
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && s.back() == ' ') s.pop_back();
    }
    std::erase_if(out, [](const std::string& s) { return s.empty(); });
    return out;
}

struct CommonOpts {
    std::string file;
    bool as_json = false;
    int precision = 3;
};

EvalOptions build_eval_options(const Database& db, const std::string& kernel,
                               const std::vector<std::string>& clamps) {
    EvalOptions opts;
    for (const auto& name : split(kernel, ',')) {
        opts.kernel.push_back(resolve_assumption(db, name));
    }
    for (const auto& spec : clamps) {
        auto eq = spec.rfind('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw CliError{1, "clamp must look like name=value: " + spec};
        }
        std::string name = spec.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            throw CliError{1, "clamp value is not a number: " + spec};
        }
        opts.clamps[resolve_assumption(db, name)] = value;
    }
    return opts;
}

double rounded(double v, int precision) { return round_half_even(v, precision); }

json trace_json(const Database& db, const CombinationPlan& plan, int precision) {
    json trace = json::array();
    auto side_envs = [&](const std::vector<PlanEnvironment>& envs, const char* side) {
        for (const auto& pe : envs) {
            json members = json::array();
            for (AssumptionId a : pe.members) members.push_back(db.core().assumptions()[a].name);
            json entry{{"step", "environment"}, {"side", side}, {"members", members},
                       {"included", pe.included}};
            if (pe.included) {
                entry["value"] = rounded(pe.value, precision);
            } else {
                entry["note"] = pe.note;
            }
            trace.push_back(entry);
        }
    };
    auto side_groups = [&](const std::vector<PlanGroup>& groups, const char* side) {
        for (const auto& g : groups) {
            trace.push_back(json{{"step", "group"},
                                 {"side", side},
                                 {"environments", g.envs.size()},
                                 {"sum", rounded(g.sum, precision)},
                                 {"clamped", g.clamped}});
        }
    };
    side_envs(plan.positive, "positive");
    side_groups(plan.positive_groups, "positive");
    side_envs(plan.negative, "negative");
    side_groups(plan.negative_groups, "negative");
    for (const auto& s : plan.steps) {
        trace.push_back(json{{"step", s.rule},
                             {"left", rounded(s.left, precision)},
                             {"right", rounded(s.right, precision)},
                             {"result", rounded(s.result, precision)}});
    }
    return trace;
}

void print_explanation(std::ostream& out, const Database& db, NodeId node, const Evaluation& eval,
                       int precision) {
    const Atms& atms = db.core();
    auto env_line = [&](const PlanEnvironment& pe) {
        std::string line = "  {";
        for (std::size_t i = 0; i < pe.members.size(); ++i) {
            const auto& a = atms.assumptions()[pe.members[i]];
            if (i) line += ", ";
            line += a.name + " " + format_number(a.mass, precision);
        }
        line += "}";
        if (pe.included) {
            line += " value " + format_number(pe.value, precision);
            if (const std::string* via = atms.provenance(node, pe.env)) line += " via " + *via;
        } else {
            line += " excluded (" + pe.note + ")";
        }
        return line;
    };
    out << "label:\n";
    if (eval.plan.positive.empty()) out << "  (empty)\n";
    for (const auto& pe : eval.plan.positive) out << env_line(pe) << "\n";
    const auto& neg = atms.nodes()[node].negation;
    if (neg) {
        out << "negation " << atms.nodes()[*neg].datum << ":\n";
        if (eval.plan.negative.empty()) out << "  (empty)\n";
        for (const auto& pe : eval.plan.negative) out << env_line(pe) << "\n";
    } else {
        out << "negation: (none)\n";
    }
    out << "plan:\n";
    auto group_lines = [&](const std::vector<PlanGroup>& groups, const char* side) {
        for (std::size_t i = 0; i < groups.size(); ++i) {
            out << "  " << side << " group " << i + 1 << ": " << groups[i].envs.size()
                << " environment(s), sum " << format_number(groups[i].sum, precision)
                << (groups[i].clamped ? " (clamped)" : "") << "\n";
        }
    };
    group_lines(eval.plan.positive_groups, "positive");
    group_lines(eval.plan.negative_groups, "negative");
    out << "  sp " << format_number(eval.plan.sp, precision) << ", sn "
        << format_number(eval.plan.sn, precision) << "\n";
    for (const auto& w : eval.plan.warnings) out << "  warning: " << w << "\n";
}

std::vector<DisjunctionId> resolve_scope(const Database& db,
                                         const std::vector<DisjunctionId>& default_scope,
                                         const std::string& scope) {
    if (scope.empty()) return default_scope;
    if (scope == "all") {
        std::vector<DisjunctionId> all(db.core().disjunctions().size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<DisjunctionId>(i);
        return all;
    }
    std::vector<DisjunctionId> out;
    for (const auto& name : split(scope, ',')) {
        NodeId n = resolve_prop(db, name);
        const auto& a = db.core().nodes()[n].assumption;
        std::optional<DisjunctionId> d;
        if (a) d = db.core().assumptions()[*a].disjunction;
        if (!d) throw CliError{1, "proposition is not a one-of member: " + name};
        if (std::find(out.begin(), out.end(), *d) == out.end()) out.push_back(*d);
    }
    return out;
}

int cmd_check(const CommonOpts& opts, std::ostream& out, std::ostream& err) {
    std::string text = read_file(opts.file);
    ProblemAst ast;
    try {
        ast = parse_problem(text);
    } catch (const ParseError& e) {
        throw CliError{1, opts.file + ":" + e.what()};
    }
    CompiledProblem problem;
    try {
        problem = compile(ast);
    } catch (const CompileError& e) {
        throw CliError{1, opts.file + ": " + e.what()};
    }
    for (const auto& w : problem.warnings) err << "warning: " << opts.file << ":" << w << "\n";
    std::size_t oneofs = 0, evidence = 0, rules = 0, equivalences = 0;
    for (const auto& s : ast.statements) {
        if (std::holds_alternative<OneOfStmt>(s.value)) ++oneofs;
        if (std::holds_alternative<EvidenceStmt>(s.value)) ++evidence;
        if (std::holds_alternative<RuleStmt>(s.value)) ++rules;
        if (std::holds_alternative<BicondStmt>(s.value)) ++equivalences;
    }
    out << "ok: " << ast.statements.size() << " statements (" << oneofs << " one-of, " << evidence
        << " evidence, " << rules << " rules, " << equivalences << " equivalences)\n";
    return 0;
}

int cmd_solve(const CommonOpts& opts, const std::string& scope, std::ostream& out,
              std::ostream& err) {
    CompiledProblem problem = load(opts.file, err);
    std::vector<DisjunctionId> disjunctions =
        resolve_scope(problem.db, problem.head_disjunctions, scope);
    std::vector<RankedSolution> solutions = problem.db.rank_solutions(disjunctions);
    if (opts.as_json) {
        json doc;
        doc["solutions"] = json::array();
        for (const auto& sol : solutions) {
            json choices = json::array();
            for (const auto& [d, a] : sol.interpretation.choices) {
                (void)d;
                choices.push_back(
                    problem.db.core().nodes()[problem.db.core().assumptions()[a].hypothesis].datum);
            }
            doc["solutions"].push_back(
                json{{"choices", choices},
                     {"lower", rounded(sol.evaluation.support.lower, opts.precision)},
                     {"upper", rounded(sol.evaluation.support.upper, opts.precision)},
                     {"trace", trace_json(problem.db, sol.evaluation.plan, opts.precision)}});
        }
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& sol : solutions) {
            out << "Solution: " << sol.datum << ": "
                << format_support(sol.evaluation.support, opts.precision) << "\n";
        }
    }
    return 0;
}

int cmd_query(const CommonOpts& opts, const std::string& prop, const std::string& kernel,
              const std::vector<std::string>& clamps, bool explain, std::ostream& out,
              std::ostream& err) {
    CompiledProblem problem = load(opts.file, err);
    NodeId node = resolve_prop(problem.db, prop);
    EvalOptions eval_opts = build_eval_options(problem.db, kernel, clamps);
    Evaluation eval;
    try {
        eval = problem.db.evaluate(node, eval_opts);
    } catch (const Error& e) {
        throw CliError{1, e.what()};
    }
    for (const auto& w : eval.plan.warnings) err << "warning: " << w << "\n";
    if (opts.as_json) {
        json doc{{"proposition", problem.db.core().nodes()[node].datum},
                 {"lower", rounded(eval.support.lower, opts.precision)},
                 {"upper", rounded(eval.support.upper, opts.precision)},
                 {"trace", trace_json(problem.db, eval.plan, opts.precision)}};
        out << doc.dump(2) << "\n";
    } else {
        out << problem.db.core().nodes()[node].datum << ": "
            << format_support(eval.support, opts.precision) << "\n";
        if (explain) print_explanation(out, problem.db, node, eval, opts.precision);
    }
    return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& prop, std::ostream& out,
                std::ostream& err) {
    CompiledProblem problem = load(opts.file, err);
    NodeId node = resolve_prop(problem.db, prop);
    Evaluation eval;
    SupportPair oracle;
    bool restricted;
    try {
        eval = problem.db.evaluate(node);
        OracleModel model(problem.db);
        oracle = model.support(node);
        restricted = model.restricted_regime() && eval.plan.sp * eval.plan.sn == 0.0;
    } catch (const DomainError& e) {
        throw CliError{1, e.what()};
    } catch (const ConflictError& e) {
        throw CliError{1, e.what()};
    }
    const double dl = std::abs(eval.support.lower - oracle.lower);
    const double du = std::abs(eval.support.upper - oracle.upper);
    char buf[64];
    out << "proposition: " << problem.db.core().nodes()[node].datum << "\n";
    out << "evaluation:  " << format_support(eval.support, opts.precision) << "\n";
    out << "oracle:      " << format_support(oracle, opts.precision) << "\n";
    std::snprintf(buf, sizeof(buf), "%.2e %.2e", dl, du);
    out << "delta:       " << buf << "\n";
    if (restricted) {
        bool pass = dl <= 1e-9 && du <= 1e-9;
        out << "regime: restricted equivalence: " << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? 0 : 1;
    }
    out << "regime: non-equivalence (informational)\n";
    return 0;
}

int cmd_oracle(const CommonOpts& opts, const std::string& prop, std::ostream& out,
               std::ostream& err) {
    CompiledProblem problem = load(opts.file, err);
    OracleModel model(problem.db);
    const auto& frames = model.frames();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        out << "frame " << i + 1 << ": {";
        const auto& worlds = frames[i].frame.worlds();
        for (std::size_t w = 0; w < worlds.size(); ++w) {
            if (w) out << ", ";
            out << worlds[w];
        }
        out << "}";
        if (!frames[i].assertions.empty()) {
            out << " evidence:";
            for (auto id : frames[i].assertions) out << " e" << id + 1;
        }
        out << "\n";
        for (const auto& [set, mass] : frames[i].combined.focal()) {
            out << "  " << frames[i].frame.describe(set) << ": "
                << format_number(mass, opts.precision) << "\n";
        }
    }
    out << "joint worlds: " << model.joint_frame().size() << "\n";
    if (!prop.empty()) {
        NodeId node = resolve_prop(problem.db, prop);
        SupportPair support = model.support(node);
        out << problem.db.core().nodes()[node].datum << ": "
            << format_support(support, opts.precision) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"evidential truth maintenance engine"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string prop, kernel, scope;
    std::vector<std::string> clamps;
    bool explain = false;

    auto add_common = [&](CLI::App* sub, bool takes_prop) {
        sub->add_option("file", opts.file, "problem description (.slp)")->required();
        if (takes_prop) sub->add_option("prop", prop, "proposition, e.g. \"(x on)\"")->required();
        sub->add_flag("--json", opts.as_json, "machine-readable output");
        sub->add_option("--precision", opts.precision, "decimal places (default 3)")
            ->check(CLI::Range(0, 15));
    };

    CLI::App* check = app.add_subcommand("check", "parse and compile only");
    add_common(check, false);

    CLI::App* solve = app.add_subcommand("solve", "enumerate and rank solutions");
    add_common(solve, false);
    solve->add_option("--scope", scope,
                      "one-of members naming the enumeration scope, or 'all' "
                      "(default: equivalence heads)");

    CLI::App* query = app.add_subcommand("query", "support for one proposition");
    add_common(query, true);
    query->add_option("--kernel", kernel, "comma-separated assumption names");
    query->add_option("--clamp", clamps, "what-if mass override name=value");
    query->add_flag("--explain", explain, "print the label and the reduction plan");

    CLI::App* compare = app.add_subcommand("compare", "cross-check a proposition with the oracle");
    add_common(compare, true);

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force evidential view of the problem");
    add_common(oracle, false);
    oracle->add_option("--prop", prop, "also report this proposition's oracle support");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) return cmd_check(opts, out, err);
        if (solve->parsed()) return cmd_solve(opts, scope, out, err);
        if (query->parsed()) return cmd_query(opts, prop, kernel, clamps, explain, out, err);
        if (compare->parsed()) return cmd_compare(opts, prop, out, err);
        if (oracle->parsed()) return cmd_oracle(opts, prop, out, err);
    } catch (const CliError& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace evtms
