#include "evtms/atms.hpp"

#include <algorithm>

namespace evtms {

Atms::Atms() {
    envs_.push_back({{}, false});
    env_ids_.emplace(std::vector<AssumptionId>{}, empty_env);
    nodes_.push_back({false_node, "false", {}, std::nullopt, std::nullopt});
    node_ids_.emplace("false", false_node);
    consumers_.emplace_back();
}

void Atms::check_node(NodeId id) const {
    if (id >= nodes_.size()) {
        throw StructuralError("unknown node id " + std::to_string(id));
    }
}

void Atms::check_env(EnvId id) const {
    if (id >= envs_.size()) {
        throw StructuralError("unknown environment id " + std::to_string(id));
    }
}

bool Atms::subset(const std::vector<AssumptionId>& a, const std::vector<AssumptionId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NodeId Atms::node(std::string datum) {
    auto it = node_ids_.find(datum);
    if (it != node_ids_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    node_ids_.emplace(datum, id);
    nodes_.push_back({id, std::move(datum), {}, std::nullopt, std::nullopt});
    consumers_.emplace_back();
    return id;
}

std::optional<NodeId> Atms::find_node(std::string_view datum) const {
    auto it = node_ids_.find(std::string(datum));
    if (it == node_ids_.end()) return std::nullopt;
    return it->second;
}

EnvId Atms::intern(std::vector<AssumptionId> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (AssumptionId a : members) {
        if (a >= assumptions_.size()) {
            throw StructuralError("unknown assumption id " + std::to_string(a));
        }
    }
    auto it = env_ids_.find(members);
    if (it != env_ids_.end()) return it->second;
    EnvId id = static_cast<EnvId>(envs_.size());
    bool nogood = false;
    for (EnvId g : nogoods_) {
        if (subset(envs_[g].members, members)) {
            nogood = true;
            break;
        }
    }
    env_ids_.emplace(members, id);
    envs_.push_back({std::move(members), nogood});
    return id;
}

EnvId Atms::env_union(EnvId a, EnvId b) {
    check_env(a);
    check_env(b);
    if (a == b) return a;
    std::vector<AssumptionId> merged;
    merged.reserve(envs_[a].members.size() + envs_[b].members.size());
    std::set_union(envs_[a].members.begin(), envs_[a].members.end(), envs_[b].members.begin(),
                   envs_[b].members.end(), std::back_inserter(merged));
    return intern(std::move(merged));
}

const std::vector<AssumptionId>& Atms::members(EnvId env) const {
    check_env(env);
    return envs_[env].members;
}

bool Atms::consistent(EnvId env) const {
    check_env(env);
    return !envs_[env].nogood;
}

bool Atms::consistent(const std::vector<AssumptionId>& members) const {
    for (EnvId g : nogoods_) {
        if (subset(envs_[g].members, members)) return false;
    }
    return true;
}

bool Atms::holds(NodeId node, EnvId env) const {
    check_node(node);
    check_env(env);
    return holds(node, envs_[env].members);
}

bool Atms::holds(NodeId node, const std::vector<AssumptionId>& env) const {
    check_node(node);
    for (EnvId e : nodes_[node].label) {
        if (subset(envs_[e].members, env)) return true;
    }
    return false;
}

AssumptionId Atms::create_assumption(double mass, Origin origin, std::string name,
                                     std::int32_t origin_ref) {
    if (!(mass >= 0.0 && mass <= 1.0)) {
        throw DomainError("assumption mass must lie in [0,1], got " + std::to_string(mass));
    }
    AssumptionId aid = static_cast<AssumptionId>(assumptions_.size());
    NodeId hyp = node(name);
    assumptions_.push_back({aid, mass, origin, origin_ref, std::move(name), hyp, std::nullopt});
    if (!nodes_[hyp].assumption) nodes_[hyp].assumption = aid;
    EnvId base = intern({aid});
    if (weave(base, hyp)) {
        provenance_.try_emplace({hyp, base}, "assumption");
        queue_.emplace_back(hyp, base);
        drain();
    }
    return aid;
}

bool Atms::weave(EnvId env, NodeId node) {
    check_env(env);
    check_node(node);
    if (node == false_node) {
        throw StructuralError("false has no label; mark the environment nogood instead");
    }
    if (envs_[env].nogood) return false;
    auto& label = nodes_[node].label;
    const auto& mem = envs_[env].members;
    for (EnvId e : label) {
        if (subset(envs_[e].members, mem)) return false;  // equal or superset of existing
    }
    std::erase_if(label, [&](EnvId e) { return subset(mem, envs_[e].members); });
    label.insert(std::upper_bound(label.begin(), label.end(), env), env);
    return true;
}

void Atms::add_justification(std::vector<NodeId> antecedents, NodeId consequent,
                             std::string informant) {
    if (antecedents.empty()) {
        throw StructuralError("justification needs at least one antecedent");
    }
    check_node(consequent);
    for (NodeId n : antecedents) {
        check_node(n);
        if (n == consequent) {
            throw StructuralError("node cannot justify itself: " + nodes_[n].datum);
        }
        if (n == false_node) {
            throw StructuralError("false cannot be an antecedent");
        }
    }
    JustificationId jid = static_cast<JustificationId>(justifications_.size());
    justifications_.push_back({jid, antecedents, consequent, std::move(informant)});
    emitted_.emplace_back();
    for (NodeId n : antecedents) {
        auto& cons = consumers_[n];
        if (cons.empty() || cons.back() != jid) cons.push_back(jid);
    }
    fire_full(jid);
    drain();
}

void Atms::fire_full(JustificationId j) {
    std::vector<EnvId> unions;
    cross(j, 0, std::nullopt, empty_env, empty_env, unions);
    for (EnvId u : unions) deliver(j, u);
}

void Atms::fire_bound(JustificationId j, NodeId at, EnvId env) {
    const auto& ants = justifications_[j].antecedents;
    std::vector<EnvId> unions;
    for (std::size_t i = 0; i < ants.size(); ++i) {
        if (ants[i] == at) cross(j, 0, i, env, empty_env, unions);
    }
    for (EnvId u : unions) deliver(j, u);
}

// Builds every cross-product union of antecedent label environments, with the
// antecedent at bound_index pinned to bound_env.  Inconsistent partial unions
// are pruned immediately; completed unions are memoized per justification so
// each distinct environment is pushed through a justification at most once.
void Atms::cross(JustificationId j, std::size_t index, std::optional<std::size_t> bound_index,
                 EnvId bound_env, EnvId acc, std::vector<EnvId>& out) {
    if (envs_[acc].nogood) return;
    const auto& ants = justifications_[j].antecedents;
    if (index == ants.size()) {
        if (emitted_[j].insert(acc).second) out.push_back(acc);
        return;
    }
    if (bound_index && *bound_index == index) {
        cross(j, index + 1, bound_index, bound_env, env_union(acc, bound_env), out);
        return;
    }
    // copy: labels mutate while delivered environments propagate
    const std::vector<EnvId> label = nodes_[ants[index]].label;
    for (EnvId e : label) {
        cross(j, index + 1, bound_index, bound_env, env_union(acc, e), out);
    }
}

void Atms::deliver(JustificationId j, EnvId env) {
    if (envs_[env].nogood) return;
    NodeId consequent = justifications_[j].consequent;
    if (consequent == false_node) {
        record_nogood(env);
    } else if (weave(env, consequent)) {
        provenance_.try_emplace({consequent, env}, justifications_[j].informant);
        queue_.emplace_back(consequent, env);
    }
}

void Atms::record_nogood(EnvId env) {
    if (envs_[env].nogood) return;  // superset of a stored nogood already
    if (envs_[env].members.empty()) {
        throw ConflictError("the empty environment is inconsistent: database has no model");
    }
    const auto& mem = envs_[env].members;
    std::erase_if(nogoods_, [&](EnvId g) { return subset(mem, envs_[g].members); });
    nogoods_.push_back(env);
    for (auto& rec : envs_) {
        if (!rec.nogood && subset(mem, rec.members)) rec.nogood = true;
    }
    for (auto& n : nodes_) {
        std::erase_if(n.label, [&](EnvId e) { return envs_[e].nogood; });
    }
}

void Atms::mark_nogood(EnvId env) {
    check_env(env);
    if (envs_[env].members.empty()) {
        throw ConflictError("cannot mark the empty environment nogood: database would be inconsistent");
    }
    record_nogood(env);
}

void Atms::drain() {
    while (!queue_.empty()) {
        auto [node, env] = queue_.front();
        queue_.pop_front();
        if (envs_[env].nogood) continue;
        // skip if subsumed meanwhile; the subsuming environment is queued
        const auto& label = nodes_[node].label;
        if (!std::binary_search(label.begin(), label.end(), env)) continue;
        const std::vector<JustificationId> consumers = consumers_[node];
        for (JustificationId j : consumers) fire_bound(j, node, env);
    }
}

DisjunctionId Atms::declare_one_of(const std::vector<NodeId>& hypothesis_nodes) {
    if (hypothesis_nodes.size() < 2) {
        throw StructuralError("one-of needs at least two members");
    }
    std::vector<AssumptionId> members;
    for (NodeId n : hypothesis_nodes) {
        check_node(n);
        const auto& a = nodes_[n].assumption;
        if (!a) {
            throw StructuralError("one-of member is not a hypothesis node: " + nodes_[n].datum);
        }
        if (assumptions_[*a].disjunction) {
            throw StructuralError("assumption already belongs to a one-of: " + assumptions_[*a].name);
        }
        members.push_back(*a);
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        throw StructuralError("duplicate one-of member");
    }
    DisjunctionId did = static_cast<DisjunctionId>(disjunctions_.size());
    disjunctions_.push_back({did, members});
    for (AssumptionId a : members) assumptions_[a].disjunction = did;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            add_justification({assumptions_[members[i]].hypothesis, assumptions_[members[j]].hypothesis},
                              false_node, "mutual-exclusion");
        }
    }
    return did;
}

void Atms::link_negation(NodeId a, NodeId b) {
    check_node(a);
    check_node(b);
    if (a == b || a == false_node || b == false_node) {
        throw StructuralError("invalid negation link");
    }
    const auto& na = nodes_[a].negation;
    const auto& nb = nodes_[b].negation;
    if (na && *na == b && nb && *nb == a) return;  // already linked
    if ((na && *na != b) || (nb && *nb != a)) {
        throw StructuralError("node already has a different negation partner");
    }
    nodes_[a].negation = b;
    nodes_[b].negation = a;
    add_justification({a, b}, false_node, "contradiction");
}

const std::string* Atms::provenance(NodeId node, EnvId env) const {
    auto it = provenance_.find({node, env});
    return it == provenance_.end() ? nullptr : &it->second;
}

std::vector<Interpretation> Atms::interpretations(std::vector<DisjunctionId> scope) const {
    if (scope.empty()) {
        throw DomainError("interpretation scope must not be empty");
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    for (DisjunctionId d : scope) {
        if (d >= disjunctions_.size()) {
            throw StructuralError("unknown disjunction id " + std::to_string(d));
        }
    }
    std::vector<Interpretation> out;
    std::vector<std::pair<DisjunctionId, AssumptionId>> choices;
    std::vector<AssumptionId> env;

    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == scope.size()) {
            out.push_back({choices, env});
            return;
        }
        for (AssumptionId a : disjunctions_[scope[i]].members) {
            auto pos = std::lower_bound(env.begin(), env.end(), a);
            env.insert(pos, a);
            if (consistent(env)) {
                choices.emplace_back(scope[i], a);
                self(self, i + 1);
                choices.pop_back();
            }
            env.erase(std::lower_bound(env.begin(), env.end(), a));
        }
    };
    recurse(recurse, 0);
    return out;
}

std::vector<Interpretation> Atms::interpretations_projected(std::vector<DisjunctionId> scope) const {
    if (scope.empty()) {
        throw DomainError("interpretation scope must not be empty");
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    std::vector<DisjunctionId> all(disjunctions_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<DisjunctionId>(i);
    std::vector<Interpretation> full = interpretations(all);

    std::vector<Interpretation> out;
    std::map<std::vector<std::pair<DisjunctionId, AssumptionId>>, bool> seen;
    for (const auto& interp : full) {
        Interpretation proj;
        for (const auto& [d, a] : interp.choices) {
            if (std::binary_search(scope.begin(), scope.end(), d)) {
                proj.choices.emplace_back(d, a);
                proj.environment.push_back(a);
            }
        }
        std::sort(proj.environment.begin(), proj.environment.end());
        if (seen.emplace(proj.choices, true).second) out.push_back(std::move(proj));
    }
    return out;
}

void Atms::check_invariants() const {
    for (const auto& n : nodes_) {
        for (std::size_t i = 0; i < n.label.size(); ++i) {
            if (envs_[n.label[i]].nogood) {
                throw StructuralError("label of " + n.datum + " contains a nogood environment");
            }
            if (!consistent(envs_[n.label[i]].members)) {
                throw StructuralError("label of " + n.datum + " contains an inconsistent environment");
            }
            for (std::size_t j = 0; j < n.label.size(); ++j) {
                if (i != j && subset(envs_[n.label[i]].members, envs_[n.label[j]].members)) {
                    throw StructuralError("label of " + n.datum + " is not minimal");
                }
            }
        }
        if (n.negation) {
            const auto& back = nodes_[*n.negation].negation;
            if (!back || *back != n.id) {
                throw StructuralError("negation link of " + n.datum + " is not symmetric");
            }
        }
    }
    for (std::size_t i = 0; i < nogoods_.size(); ++i) {
        for (std::size_t j = 0; j < nogoods_.size(); ++j) {
            if (i != j && subset(envs_[nogoods_[i]].members, envs_[nogoods_[j]].members)) {
                throw StructuralError("nogood store is not minimal");
            }
        }
    }
}

}  // namespace evtms
