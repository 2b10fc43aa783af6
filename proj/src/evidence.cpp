#include "evtms/evidence.hpp"

#include <algorithm>

namespace evtms {

NodeId Database::negation(NodeId n) {
    const auto& nodes = atms_.nodes();
    if (n >= nodes.size() || n == Atms::false_node) {
        throw StructuralError("invalid node for negation");
    }
    if (nodes[n].negation) return *nodes[n].negation;
    NodeId neg = atms_.node("(not " + nodes[n].datum + ")");
    atms_.link_negation(n, neg);
    return neg;
}

const EvidenceAssertion& Database::assert_evidence(NodeId hypothesis, SupportPair pair) {
    if (!pair.valid()) {
        throw DomainError("evidence support pair must satisfy 0 <= lower <= upper <= 1");
    }
    if (hypothesis == Atms::false_node) {
        throw StructuralError("cannot assert evidence for false");
    }
    const std::int32_t id = static_cast<std::int32_t>(evidence_.size());
    const std::string tag = "e" + std::to_string(id + 1);
    NodeId neg_node = negation(hypothesis);

    AssumptionId positive =
        atms_.create_assumption(pair.lower, Origin::evidence_positive, tag + "+", id);
    atms_.add_justification({atms_.assumptions()[positive].hypothesis}, hypothesis, tag);

    std::optional<AssumptionId> negative;
    if (pair.upper < 1.0) {
        negative = atms_.create_assumption(1.0 - pair.upper, Origin::evidence_negative, tag + "-", id);
        atms_.add_justification({atms_.assumptions()[*negative].hypothesis}, neg_node, tag);
    }
    evidence_.push_back({id, hypothesis, pair, positive, negative});
    return evidence_.back();
}

const CompiledRule& Database::add_rule(std::vector<NodeId> antecedents, NodeId consequent,
                                       SupportPair strength) {
    if (!strength.valid()) {
        throw DomainError("rule strength must satisfy 0 <= lower <= upper <= 1");
    }
    if (antecedents.empty()) {
        throw StructuralError("rule needs at least one antecedent");
    }
    const std::int32_t id = static_cast<std::int32_t>(rules_.size());
    const std::string tag = "r" + std::to_string(id + 1);

    AssumptionId positive =
        atms_.create_assumption(strength.lower, Origin::rule_strength, tag + "+", id);
    std::vector<NodeId> ants_pos = antecedents;
    ants_pos.push_back(atms_.assumptions()[positive].hypothesis);
    atms_.add_justification(std::move(ants_pos), consequent, tag);

    std::optional<AssumptionId> negative;
    if (strength.upper < 1.0) {
        NodeId neg_node = negation(consequent);
        negative = atms_.create_assumption(1.0 - strength.upper, Origin::rule_strength, tag + "-", id);
        std::vector<NodeId> ants_neg = antecedents;
        ants_neg.push_back(atms_.assumptions()[*negative].hypothesis);
        atms_.add_justification(std::move(ants_neg), neg_node, tag);
    }
    rules_.push_back({id, std::move(antecedents), consequent, strength, positive, negative});
    return rules_.back();
}

std::optional<AssumptionId> Database::find_assumption(std::string_view name) const {
    for (const auto& a : atms_.assumptions()) {
        if (a.name == name) return a.id;
    }
    return std::nullopt;
}

double Database::side_support(NodeId node, const std::vector<AssumptionId>& kernel,
                              const std::map<AssumptionId, double>& clamps,
                              std::vector<PlanEnvironment>& envs_out,
                              std::vector<PlanGroup>& groups_out, CombinationPlan& plan) const {
    const auto& assumptions = atms_.assumptions();
    for (EnvId e : atms_.nodes()[node].label) {
        PlanEnvironment pe{e, atms_.members(e), 0.0, false, ""};
        bool choice = false;
        for (AssumptionId a : pe.members) {
            if (assumptions[a].origin == Origin::plain) {
                choice = true;
                break;
            }
        }
        if (choice) {
            pe.note = "choice";
        } else if (!kernel.empty()) {
            std::vector<AssumptionId> merged;
            std::set_union(pe.members.begin(), pe.members.end(), kernel.begin(), kernel.end(),
                           std::back_inserter(merged));
            if (!atms_.consistent(merged)) pe.note = "kernel";
        }
        if (pe.note.empty()) {
            pe.included = true;
            pe.value = 1.0;
            for (AssumptionId a : pe.members) {
                auto it = clamps.find(a);
                pe.value *= it != clamps.end() ? it->second : assumptions[a].mass;
            }
        }
        envs_out.push_back(std::move(pe));
    }

    // exclusivity groups: first fit in ascending environment order; an
    // environment joins a group only if its union with every member is
    // inconsistent (the evidence bodies are disjoint events)
    for (const auto& pe : envs_out) {
        if (!pe.included) continue;
        bool placed = false;
        for (auto& g : groups_out) {
            bool exclusive = true;
            for (EnvId other : g.envs) {
                std::vector<AssumptionId> merged;
                const auto& om = atms_.members(other);
                std::set_union(pe.members.begin(), pe.members.end(), om.begin(), om.end(),
                               std::back_inserter(merged));
                if (atms_.consistent(merged)) {
                    exclusive = false;
                    break;
                }
            }
            if (exclusive) {
                plan.steps.push_back({"exclusive-sum", g.sum, pe.value, g.sum + pe.value});
                g.envs.push_back(pe.env);
                g.sum += pe.value;
                placed = true;
                break;
            }
        }
        if (!placed) groups_out.push_back({{pe.env}, pe.value, false});
    }
    for (auto& g : groups_out) {
        if (g.sum > 1.0) {
            g.sum = 1.0;
            g.clamped = true;
            plan.warnings.push_back("exclusive group mass exceeded 1 at " +
                                    atms_.nodes()[node].datum + "; clamped");
        }
    }

    // remaining groups are assumed independent
    double acc = 0.0;
    bool first = true;
    for (const auto& g : groups_out) {
        if (first) {
            acc = g.sum;
            first = false;
        } else {
            double prev = acc;
            acc = slp_combine({acc, 1.0}, {g.sum, 1.0}).lower;
            plan.steps.push_back({"independent", prev, g.sum, acc});
        }
    }
    return acc;
}

Evaluation Database::evaluate(NodeId node) const {
    return evaluate(node, EvalOptions{});
}

Evaluation Database::evaluate_with_kernel(NodeId node,
                                          const std::vector<AssumptionId>& kernel) const {
    EvalOptions opts;
    opts.kernel = kernel;
    return evaluate(node, opts);
}

Evaluation Database::evaluate_with_clamp(NodeId node,
                                         const std::map<AssumptionId, double>& overrides) const {
    EvalOptions opts;
    opts.clamps = overrides;
    return evaluate(node, opts);
}

Evaluation Database::evaluate(NodeId node, const EvalOptions& opts) const {
    if (node >= atms_.nodes().size() || node == Atms::false_node) {
        throw StructuralError("cannot evaluate this node");
    }
    for (const auto& [a, v] : opts.clamps) {
        if (a >= atms_.assumptions().size()) {
            throw DomainError("clamp names an unknown assumption");
        }
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("clamp value must lie in [0,1], got " + std::to_string(v));
        }
    }
    std::vector<AssumptionId> kernel = opts.kernel;
    std::sort(kernel.begin(), kernel.end());
    kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
    for (AssumptionId a : kernel) {
        if (a >= atms_.assumptions().size()) {
            throw DomainError("kernel names an unknown assumption");
        }
    }
    if (!kernel.empty() && !atms_.consistent(kernel)) {
        throw DomainError("kernel set is inconsistent");
    }

    Evaluation out;
    CombinationPlan& plan = out.plan;
    plan.sp = side_support(node, kernel, opts.clamps, plan.positive, plan.positive_groups, plan);
    if (const auto& neg = atms_.nodes()[node].negation) {
        plan.sn = side_support(*neg, kernel, opts.clamps, plan.negative, plan.negative_groups, plan);
    }
    out.support = slp_combine({plan.sp, 1.0}, {0.0, 1.0 - plan.sn});
    plan.steps.push_back({"normalize", plan.sp, plan.sn, out.support.lower});
    return out;
}

std::vector<RankedSolution> Database::rank_solutions(const std::vector<DisjunctionId>& scope) {
    if (scope.empty()) return {};
    std::vector<Interpretation> interps = atms_.interpretations_projected(scope);

    std::vector<RankedSolution> out;
    out.reserve(interps.size());
    for (auto& interp : interps) {
        std::vector<NodeId> chosen;
        std::string datum;
        for (const auto& [d, a] : interp.choices) {
            (void)d;
            NodeId h = atms_.assumptions()[a].hypothesis;
            chosen.push_back(h);
            if (!datum.empty()) datum += " ";
            datum += atms_.nodes()[h].datum;
        }
        NodeId conj;
        if (chosen.size() == 1) {
            conj = chosen[0];
        } else {
            conj = atms_.node("(and " + datum + ")");
            if (solution_conjunctions_.insert(conj).second) {
                atms_.add_justification(chosen, conj, "solution");
            }
        }
        out.push_back({std::move(interp), conj, std::move(datum), {}});
    }
    for (auto& sol : out) sol.evaluation = evaluate(sol.conjunction);

    std::stable_sort(out.begin(), out.end(), [](const RankedSolution& a, const RankedSolution& b) {
        if (a.evaluation.support.lower != b.evaluation.support.lower) {
            return a.evaluation.support.lower > b.evaluation.support.lower;
        }
        if (a.evaluation.support.upper != b.evaluation.support.upper) {
            return a.evaluation.support.upper > b.evaluation.support.upper;
        }
        return a.datum < b.datum;
    });
    return out;
}

}  // namespace evtms
