#ifndef EVTMS_EVIDENCE_HPP
#define EVTMS_EVIDENCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evtms/atms.hpp"
#include "evtms/support.hpp"

namespace evtms {

/// One uncertain fact mapped onto the database: a positive assumption with
/// mass = lower, and, when upper < 1, a negative assumption with
/// mass = 1 - upper supporting the negation node.
struct EvidenceAssertion {
    std::int32_t id;
    NodeId hypothesis;
    SupportPair pair;
    AssumptionId positive;
    std::optional<AssumptionId> negative;
};

/// An uncertain rule mapped onto two justifications: antecedents plus the
/// positive strength assumption (mass Sl) imply the consequent; antecedents
/// plus the negative strength assumption (mass 1 - Su, present iff Su < 1)
/// imply its negation.  Chains therefore stay multiplicative: every numeric
/// factor lives in the label itself.  A certain rule ([1, 1]) carries no
/// strength assumption at all: the factor is one, and a bare justification
/// keeps dependent paths subsumable ({a} still absorbs {a, b}).
struct CompiledRule {
    std::int32_t id;
    std::vector<NodeId> antecedents;
    NodeId consequent;
    SupportPair strength;
    std::optional<AssumptionId> positive;  // absent iff strength is [1, 1]
    std::optional<AssumptionId> negative;  // absent iff upper is 1
};

/// How one label environment entered (or was excluded from) an evaluation.
struct PlanEnvironment {
    EnvId env;
    std::vector<AssumptionId> members;
    double value = 0.0;  // product of member masses
    bool included = false;
    std::string note;  // "", "choice", "kernel"
};

/// Pairwise mutually exclusive environments whose values combine additively.
struct PlanGroup {
    std::vector<EnvId> envs;
    double sum = 0.0;
    bool clamped = false;
};

/// One pairwise combination in the reduction to a support pair.
struct PlanStep {
    std::string rule;  // "exclusive-sum" | "independent" | "normalize"
    double left = 0.0;
    double right = 0.0;
    double result = 0.0;
};

/// Full record of how a label was reduced to a support pair.
struct CombinationPlan {
    std::vector<PlanEnvironment> positive, negative;
    std::vector<PlanGroup> positive_groups, negative_groups;
    std::vector<PlanStep> steps;
    double sp = 0.0;  // aggregated support for the node
    double sn = 0.0;  // aggregated support for its negation
    std::vector<std::string> warnings;
};

struct Evaluation {
    SupportPair support;
    CombinationPlan plan;
};

struct EvalOptions {
    std::vector<AssumptionId> kernel;       // keep only environments consistent with this
    std::map<AssumptionId, double> clamps;  // what-if mass overrides, values in [0,1]
};

struct RankedSolution {
    Interpretation interpretation;
    NodeId conjunction;
    std::string datum;  // chosen propositions, e.g. "(x on) (y off) (z off)"
    Evaluation evaluation;
};

/// Evidential database: owns the ATMS and maps support-logic statements onto
/// it; evaluates node labels into support pairs.
///
/// Evaluation pipeline: each label environment is valued by the product of
/// its member masses and treated as a simple support [v, 1]; environments
/// with pairwise inconsistent unions form exclusivity groups whose values
/// add (one basic probability assignment split over disjoint events); group
/// values are assumed independent and combined with slp_combine; the same
/// computation on the negation label yields SN; the answer is
/// slp_combine([SP, 1], [0, 1 - SN]).  Environments containing a plain
/// (choice) assumption carry no evidential mass and are skipped.  Dependent
/// (subset-related) evidence never reaches the computation at all: label
/// minimality has already subsumed it.
class Database {
public:
    Atms& core() { return atms_; }
    const Atms& core() const { return atms_; }

    NodeId node(std::string datum) { return atms_.node(std::move(datum)); }

    /// Negation partner of n, created and linked on demand.
    NodeId negation(NodeId n);

    const EvidenceAssertion& assert_evidence(NodeId hypothesis, SupportPair pair);

    const CompiledRule& add_rule(std::vector<NodeId> antecedents, NodeId consequent,
                                 SupportPair strength);

    Evaluation evaluate(NodeId node) const;
    Evaluation evaluate(NodeId node, const EvalOptions& opts) const;
    Evaluation evaluate_with_kernel(NodeId node, const std::vector<AssumptionId>& kernel) const;
    Evaluation evaluate_with_clamp(NodeId node, const std::map<AssumptionId, double>& overrides) const;

    /// Consistent choices over the scoped disjunctions (projected from full
    /// interpretations), each evaluated through a conjunction node justified
    /// by the chosen hypothesis nodes; sorted by descending lower support,
    /// ties by descending upper, then lexicographic datum order.
    std::vector<RankedSolution> rank_solutions(const std::vector<DisjunctionId>& scope);

    const std::vector<EvidenceAssertion>& evidence() const { return evidence_; }
    const std::vector<CompiledRule>& rules() const { return rules_; }

    std::optional<AssumptionId> find_assumption(std::string_view name) const;

private:
    double side_support(NodeId node, const std::vector<AssumptionId>& kernel,
                        const std::map<AssumptionId, double>& clamps,
                        std::vector<PlanEnvironment>& envs_out, std::vector<PlanGroup>& groups_out,
                        CombinationPlan& plan) const;

    Atms atms_;
    std::vector<EvidenceAssertion> evidence_;
    std::vector<CompiledRule> rules_;
    std::set<NodeId> solution_conjunctions_;
};

}  // namespace evtms

#endif
