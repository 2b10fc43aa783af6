#ifndef EVTMS_ATMS_HPP
#define EVTMS_ATMS_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evtms/errors.hpp"

namespace evtms {

using AssumptionId = std::uint32_t;
using NodeId = std::uint32_t;
using EnvId = std::uint32_t;
using JustificationId = std::uint32_t;
using DisjunctionId = std::uint32_t;

/// Where an assumption's evidential mass comes from.  Plain assumptions are
/// pure truth tokens (interpretation choice points): they take part in label
/// propagation, nogood handling and interpretation construction, but carry
/// no evidential mass, and environments containing one are skipped by the
/// numeric evaluation layer.
enum class Origin {
    plain,
    evidence_positive,
    evidence_negative,
    rule_strength,
};

struct Assumption {
    AssumptionId id;
    double mass;
    Origin origin;
    std::int32_t origin_ref;  // owning evidence assertion or rule, -1 if none
    std::string name;
    NodeId hypothesis;  // node asserted by exactly this assumption
    std::optional<DisjunctionId> disjunction;
};

struct Justification {
    JustificationId id;
    std::vector<NodeId> antecedents;  // non-empty
    NodeId consequent;                // may be Atms::false_node
    std::string informant;
};

struct Node {
    NodeId id;
    std::string datum;
    std::vector<EnvId> label;  // minimal consistent environments, ascending id
    std::optional<NodeId> negation;
    std::optional<AssumptionId> assumption;  // set when this is a hypothesis node
};

/// A mutually exclusive hypothesis set.  Exclusivity is installed as pairwise
/// justifications to false at declaration time; exhaustiveness is not encoded
/// in labels and only enters through interpretation construction.
struct Disjunction {
    DisjunctionId id;
    std::vector<AssumptionId> members;  // ascending, >= 2
};

/// One consistent choice of exactly one member per scoped disjunction.
struct Interpretation {
    std::vector<std::pair<DisjunctionId, AssumptionId>> choices;
    std::vector<AssumptionId> environment;  // union of the choices, sorted
};

/// Assumption-based truth maintenance database.
///
/// Grow-only: assumptions, nodes and justifications are never retracted, and
/// an environment that becomes inconsistent stays inconsistent.  Mutating
/// operations must be issued from a single logical thread; once quiescent,
/// all query operations are const and safe to run concurrently.
class Atms {
public:
    static constexpr NodeId false_node = 0;
    static constexpr EnvId empty_env = 0;

    Atms();

    // ---- construction ----------------------------------------------------

    /// Creates an assumption and its hypothesis node (label {{a}}), reusing
    /// an existing node with datum == name if present.
    AssumptionId create_assumption(double mass, Origin origin, std::string name,
                                   std::int32_t origin_ref = -1);

    /// Interns a node by datum; the same datum always yields the same node.
    NodeId node(std::string datum);

    /// Installs a justification and propagates labels to fixpoint.  Cyclic
    /// justification graphs are legal; environments only grow along a path,
    /// so propagation terminates.
    void add_justification(std::vector<NodeId> antecedents, NodeId consequent,
                           std::string informant);

    /// Declares a one-of disjunction over hypothesis nodes.  Installs the
    /// pairwise justifications {h_i, h_j} -> false.
    DisjunctionId declare_one_of(const std::vector<NodeId>& hypothesis_nodes);

    /// Marks two nodes as each other's negation and installs {a, b} -> false.
    /// Idempotent for an already linked pair.
    void link_negation(NodeId a, NodeId b);

    /// Records env as inconsistent, keeps the nogood store minimal and purges
    /// every label environment that is a superset of env.
    void mark_nogood(EnvId env);

    // ---- environments ----------------------------------------------------

    EnvId intern(std::vector<AssumptionId> members);
    EnvId env_union(EnvId a, EnvId b);
    const std::vector<AssumptionId>& members(EnvId env) const;

    // ---- queries (const, safe once quiescent) -----------------------------

    bool consistent(EnvId env) const;
    bool consistent(const std::vector<AssumptionId>& members) const;

    /// True iff some label environment of node is a subset of env.
    bool holds(NodeId node, EnvId env) const;
    bool holds(NodeId node, const std::vector<AssumptionId>& env) const;

    /// All consistent assignments of exactly one member per scoped
    /// disjunction, in lexicographic order of assumption ids.  Backtracking
    /// product with nogood pruning at each partial assignment.
    std::vector<Interpretation> interpretations(std::vector<DisjunctionId> scope) const;

    /// Interpretations over *all* declared disjunctions, projected onto the
    /// scoped ones and deduplicated.  This is what solution enumeration uses:
    /// a projected choice survives only if it extends to a globally
    /// consistent interpretation.
    std::vector<Interpretation> interpretations_projected(std::vector<DisjunctionId> scope) const;

    std::optional<NodeId> find_node(std::string_view datum) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Assumption>& assumptions() const { return assumptions_; }
    const std::vector<Justification>& justifications() const { return justifications_; }
    const std::vector<Disjunction>& disjunctions() const { return disjunctions_; }
    /// Minimal nogoods, in the order they were discovered.
    const std::vector<EnvId>& nogoods() const { return nogoods_; }

    /// Informant of the justification that first produced env at node
    /// ("assumption" for hypothesis base environments); null if unknown.
    const std::string* provenance(NodeId node, EnvId env) const;

    /// Label surgery step: rejects env if it is inconsistent or a superset of
    /// (or equal to) an existing label environment; otherwise removes the
    /// supersets of env from the label and inserts it.  A true return
    /// obligates the caller to continue propagation downstream; the public
    /// mutators do this automatically.
    bool weave(EnvId env, NodeId node);

    /// Verifies label minimality/consistency, nogood minimality and negation
    /// symmetry; throws StructuralError on violation.  Test support.
    void check_invariants() const;

private:
    struct EnvRec {
        std::vector<AssumptionId> members;
        bool nogood = false;
    };

    void check_node(NodeId id) const;
    void check_env(EnvId id) const;
    static bool subset(const std::vector<AssumptionId>& a, const std::vector<AssumptionId>& b);

    void fire_full(JustificationId j);
    void fire_bound(JustificationId j, NodeId at, EnvId env);
    void cross(JustificationId j, std::size_t index, std::optional<std::size_t> bound_index,
               EnvId bound_env, EnvId acc, std::vector<EnvId>& out);
    void deliver(JustificationId j, EnvId env);
    void record_nogood(EnvId env);
    void drain();

    std::vector<EnvRec> envs_;
    std::map<std::vector<AssumptionId>, EnvId> env_ids_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, NodeId> node_ids_;
    std::vector<Assumption> assumptions_;
    std::vector<Justification> justifications_;
    std::vector<std::vector<JustificationId>> consumers_;  // per node
    std::vector<std::unordered_set<EnvId>> emitted_;       // per justification
    std::vector<Disjunction> disjunctions_;
    std::vector<EnvId> nogoods_;
    std::map<std::pair<NodeId, EnvId>, std::string> provenance_;
    std::deque<std::pair<NodeId, EnvId>> queue_;
};

}  // namespace evtms

#endif
