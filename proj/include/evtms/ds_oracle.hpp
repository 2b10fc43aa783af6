#ifndef EVTMS_DS_ORACLE_HPP
#define EVTMS_DS_ORACLE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evtms/support.hpp"

namespace evtms {

/// Subset of a frame's worlds as a bitmask.
using WorldSet = std::uint64_t;

/// Explicit finite frame of discernment.  This is a desk-scale verifier:
/// frames fed into a model should stay small (see OracleModel::frame_cap);
/// the hard limit is the mask width.
class Frame {
public:
    static constexpr std::size_t max_worlds = 64;

    explicit Frame(std::vector<std::string> worlds);

    std::size_t size() const { return worlds_.size(); }
    const std::vector<std::string>& worlds() const { return worlds_; }
    std::size_t index(std::string_view world) const;  // throws DomainError if unknown
    WorldSet full() const;
    WorldSet singleton(std::size_t i) const;
    std::string describe(WorldSet s) const;  // "{a, b}", "theta" for the full set

    friend bool operator==(const Frame& a, const Frame& b) { return a.worlds_ == b.worlds_; }

private:
    std::vector<std::string> worlds_;
};

/// Basic probability assignment with sparse focal sets.  Invariants: every
/// focal mass is positive, the empty set is never focal, and the masses sum
/// to one; mass on the full set is the uncommitted remainder (theta).
class MassFunction {
public:
    MassFunction(Frame frame, std::map<WorldSet, double> focal);

    static MassFunction vacuous(Frame frame);

    const Frame& frame() const { return frame_; }
    const std::map<WorldSet, double>& focal() const { return focal_; }

private:
    Frame frame_;
    std::map<WorldSet, double> focal_;
};

/// Dempster's rule: pairwise focal intersection with mass products, empty
/// intersections renormalized away.  Throws ConflictError at total conflict.
MassFunction dempster_combine(const MassFunction& a, const MassFunction& b);

/// Sum of masses of focal sets contained in s.
double belief(const MassFunction& m, WorldSet s);

/// Sum of masses of focal sets intersecting s.
double plausibility(const MassFunction& m, WorldSet s);

/// Maps a support pair for one hypothesis onto its frame: `lower` on the
/// singleton, `1 - upper` on its complement, the remainder on theta.
MassFunction pair_to_mass(const SupportPair& pair, std::size_t world, const Frame& frame);

/// Combines each frame's evidence, then forms the product frame with
/// cylindrical-extension product masses (frames independent).  Per-frame
/// mass lists must be non-empty.
std::pair<Frame, MassFunction> product_frame(const std::vector<Frame>& frames,
                                             const std::vector<std::vector<MassFunction>>& masses);

}  // namespace evtms

#endif
