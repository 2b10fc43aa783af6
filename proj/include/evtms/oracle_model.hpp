#ifndef EVTMS_ORACLE_MODEL_HPP
#define EVTMS_ORACLE_MODEL_HPP

#include <optional>
#include <vector>

#include "evtms/ds_oracle.hpp"
#include "evtms/evidence.hpp"

namespace evtms {

/// Brute-force evidential view of a database, independent of label
/// propagation: one frame per one-of disjunction plus a two-world frame per
/// evidence hypothesis outside any one-of.  Evidence is combined per frame
/// with Dempster's rule, frames are multiplied out, and the joint mass is
/// conditioned on the worlds that survive the certain structure (plain and
/// mass-one justifications).  A node's support is then
///   [Bel(worlds forcing it), 1 - Bel(worlds forcing its negation)].
class OracleModel {
public:
    /// Desk-scale limit for any single input frame.
    static constexpr std::size_t frame_cap = 20;

    struct FrameInfo {
        Frame frame;
        std::vector<NodeId> world_nodes;     // node made true by each world
        std::vector<std::int32_t> assertions;  // evidence combined into this frame
        MassFunction combined;
    };

    explicit OracleModel(const Database& db);

    SupportPair support(NodeId node) const;

    /// True when every frame carries at most one evidence assertion, every
    /// rule is certain ([1, 1]) and the certain structure excluded no mass;
    /// in this regime the label evaluation is expected to match the oracle
    /// exactly (as long as the queried node is itself conflict-free).
    bool restricted_regime() const { return restricted_; }

    const std::vector<FrameInfo>& frames() const { return frames_; }
    const Frame& joint_frame() const { return joint_frame_; }
    const MassFunction& joint_mass() const { return joint_mass_; }

private:
    bool derives(NodeId node, std::size_t world) const;

    const Database* db_;
    std::vector<FrameInfo> frames_;
    Frame joint_frame_;
    MassFunction joint_mass_;
    std::vector<std::vector<char>> truths_;  // per world, per node
    std::vector<char> world_consistent_;
    bool restricted_ = true;
};

}  // namespace evtms

#endif
