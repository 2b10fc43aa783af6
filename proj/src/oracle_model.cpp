#include "evtms/oracle_model.hpp"

#include <algorithm>
#include <map>

namespace evtms {

OracleModel::OracleModel(const Database& db)
    : db_(&db), joint_frame_({"(top)"}), joint_mass_(MassFunction::vacuous(joint_frame_)) {
    const Atms& atms = db.core();

    // frames from one-of disjunctions
    std::map<NodeId, std::pair<std::size_t, std::size_t>> framed;  // node -> (frame, world)
    for (const auto& d : atms.disjunctions()) {
        std::vector<std::string> worlds;
        std::vector<NodeId> world_nodes;
        for (AssumptionId a : d.members) {
            NodeId h = atms.assumptions()[a].hypothesis;
            worlds.push_back(atms.nodes()[h].datum);
            world_nodes.push_back(h);
        }
        if (worlds.size() > frame_cap) {
            throw DomainError("oracle frame cap exceeded: " + std::to_string(worlds.size()) +
                              " worlds in one frame");
        }
        for (std::size_t w = 0; w < world_nodes.size(); ++w) {
            framed.emplace(world_nodes[w], std::make_pair(frames_.size(), w));
        }
        Frame frame(worlds);
        MassFunction vac = MassFunction::vacuous(frame);
        frames_.push_back({std::move(frame), std::move(world_nodes), {}, std::move(vac)});
    }

    // a private two-world frame per evidence hypothesis outside any one-of
    for (const auto& ev : db.evidence()) {
        if (framed.count(ev.hypothesis)) continue;
        const Node& n = atms.nodes()[ev.hypothesis];
        NodeId neg = n.negation ? *n.negation : Atms::false_node;
        Frame frame({n.datum, "(not " + n.datum + ")"});
        framed.emplace(ev.hypothesis, std::make_pair(frames_.size(), std::size_t{0}));
        MassFunction vac = MassFunction::vacuous(frame);
        frames_.push_back({std::move(frame), {ev.hypothesis, neg}, {}, std::move(vac)});
    }

    // combine evidence per frame
    for (const auto& ev : db.evidence()) {
        auto [fi, wi] = framed.at(ev.hypothesis);
        FrameInfo& info = frames_[fi];
        info.assertions.push_back(ev.id);
        MassFunction m = pair_to_mass(ev.pair, wi, info.frame);
        info.combined = info.assertions.size() == 1 ? std::move(m)
                                                    : dempster_combine(info.combined, m);
        if (info.assertions.size() > 1) restricted_ = false;
    }
    for (const auto& rule : db.rules()) {
        if (!(rule.strength.lower == 1.0 && rule.strength.upper == 1.0)) restricted_ = false;
    }

    // joint mass over the product of all frames
    if (!frames_.empty()) {
        std::vector<Frame> fs;
        std::vector<std::vector<MassFunction>> ms;
        for (const auto& info : frames_) {
            fs.push_back(info.frame);
            ms.push_back({info.combined});
        }
        auto [jf, jm] = product_frame(fs, ms);
        joint_frame_ = std::move(jf);
        joint_mass_ = std::move(jm);
    }

    // close each joint world under the certain structure: world facts are the
    // chosen member per frame plus the negations of the unchosen members;
    // rule-strength tokens count as true only at mass exactly one
    const std::size_t n_worlds = joint_frame_.size();
    const std::size_t n_nodes = atms.nodes().size();
    std::vector<char> token_true(n_nodes, 0);
    for (const auto& a : atms.assumptions()) {
        if (a.origin == Origin::rule_strength && a.mass == 1.0) token_true[a.hypothesis] = 1;
    }
    truths_.assign(n_worlds, std::vector<char>(n_nodes, 0));
    world_consistent_.assign(n_worlds, 1);
    for (std::size_t w = 0; w < n_worlds; ++w) {
        std::vector<char>& truth = truths_[w];
        for (std::size_t i = 0; i < n_nodes; ++i) truth[i] = token_true[i];
        if (!frames_.empty()) {
            std::size_t rest = w;
            std::vector<std::size_t> idx(frames_.size());
            for (std::size_t i = frames_.size(); i-- > 0;) {
                idx[i] = rest % frames_[i].frame.size();
                rest /= frames_[i].frame.size();
            }
            for (std::size_t i = 0; i < frames_.size(); ++i) {
                const auto& world_nodes = frames_[i].world_nodes;
                for (std::size_t k = 0; k < world_nodes.size(); ++k) {
                    if (world_nodes[k] == Atms::false_node) continue;
                    if (k == idx[i]) {
                        truth[world_nodes[k]] = 1;
                    } else if (const auto& neg = atms.nodes()[world_nodes[k]].negation) {
                        truth[*neg] = 1;
                    }
                }
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& j : atms.justifications()) {
                bool fires = true;
                for (NodeId a : j.antecedents) {
                    if (!truth[a]) {
                        fires = false;
                        break;
                    }
                }
                if (!fires) continue;
                if (j.consequent == Atms::false_node) {
                    world_consistent_[w] = 0;
                } else if (!truth[j.consequent]) {
                    truth[j.consequent] = 1;
                    changed = true;
                }
            }
            if (!world_consistent_[w]) break;
        }
    }

    // condition the joint mass on the consistent worlds
    WorldSet consistent_mask = 0;
    for (std::size_t w = 0; w < n_worlds; ++w) {
        if (world_consistent_[w]) consistent_mask |= WorldSet{1} << w;
    }
    if (consistent_mask == 0) {
        throw ConflictError("no joint world survives the certain structure");
    }
    if (consistent_mask != joint_frame_.full()) {
        MassFunction constraint(joint_frame_, {{consistent_mask, 1.0}});
        MassFunction conditioned = dempster_combine(joint_mass_, constraint);
        // any excluded mass means renormalization happened
        if (plausibility(joint_mass_, ~consistent_mask & joint_frame_.full()) > 0.0) {
            restricted_ = false;
        }
        joint_mass_ = std::move(conditioned);
    }
}

bool OracleModel::derives(NodeId node, std::size_t world) const {
    return world_consistent_[world] && truths_[world][node];
}

SupportPair OracleModel::support(NodeId node) const {
    const Atms& atms = db_->core();
    if (node >= atms.nodes().size()) {
        throw StructuralError("unknown node id " + std::to_string(node));
    }
    WorldSet pos = 0;
    for (std::size_t w = 0; w < joint_frame_.size(); ++w) {
        if (derives(node, w)) pos |= WorldSet{1} << w;
    }
    WorldSet neg = 0;
    if (const auto& partner = atms.nodes()[node].negation) {
        for (std::size_t w = 0; w < joint_frame_.size(); ++w) {
            if (derives(*partner, w)) neg |= WorldSet{1} << w;
        }
    }
    return {belief(joint_mass_, pos), 1.0 - belief(joint_mass_, neg)};
}

}  // namespace evtms
