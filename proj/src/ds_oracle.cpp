#include "evtms/ds_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace evtms {

namespace {
constexpr double k_mass_sum_tolerance = 1e-12;
}

Frame::Frame(std::vector<std::string> worlds) : worlds_(std::move(worlds)) {
    if (worlds_.empty()) throw DomainError("frame needs at least one world");
    if (worlds_.size() > max_worlds) {
        throw DomainError("frame exceeds " + std::to_string(max_worlds) + " worlds");
    }
    std::set<std::string> seen(worlds_.begin(), worlds_.end());
    if (seen.size() != worlds_.size()) throw DomainError("frame world labels must be unique");
}

std::size_t Frame::index(std::string_view world) const {
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
        if (worlds_[i] == world) return i;
    }
    throw DomainError("unknown world: " + std::string(world));
}

WorldSet Frame::full() const {
    return worlds_.size() == max_worlds ? ~WorldSet{0} : (WorldSet{1} << worlds_.size()) - 1;
}

WorldSet Frame::singleton(std::size_t i) const {
    if (i >= worlds_.size()) throw DomainError("world index out of range");
    return WorldSet{1} << i;
}

std::string Frame::describe(WorldSet s) const {
    if (s == full()) return "theta";
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
        if (s & (WorldSet{1} << i)) {
            if (!first) out += ", ";
            out += worlds_[i];
            first = false;
        }
    }
    return out + "}";
}

MassFunction::MassFunction(Frame frame, std::map<WorldSet, double> focal)
    : frame_(std::move(frame)), focal_(std::move(focal)) {
    double sum = 0.0;
    for (const auto& [set, mass] : focal_) {
        if (set == 0) throw DomainError("the empty set cannot be focal");
        if ((set & ~frame_.full()) != 0) throw DomainError("focal set outside the frame");
        if (mass <= 0.0) throw DomainError("focal masses must be positive");
        sum += mass;
    }
    if (std::abs(sum - 1.0) > k_mass_sum_tolerance) {
        throw DomainError("focal masses must sum to 1, got " + std::to_string(sum));
    }
}

MassFunction MassFunction::vacuous(Frame frame) {
    WorldSet full = frame.full();
    return MassFunction(std::move(frame), {{full, 1.0}});
}

MassFunction dempster_combine(const MassFunction& a, const MassFunction& b) {
    if (!(a.frame() == b.frame())) {
        throw DomainError("cannot combine mass functions over different frames");
    }
    double conflict = 0.0;
    std::map<WorldSet, double> out;
    for (const auto& [fa, ma] : a.focal()) {
        for (const auto& [fb, mb] : b.focal()) {
            WorldSet inter = fa & fb;
            if (inter == 0) {
                conflict += ma * mb;
            } else {
                out[inter] += ma * mb;
            }
        }
    }
    const double k = 1.0 - conflict;
    if (k <= k_conflict_tolerance) {
        throw ConflictError("totally conflicting mass functions");
    }
    for (auto& [set, mass] : out) mass /= k;
    return MassFunction(a.frame(), std::move(out));
}

double belief(const MassFunction& m, WorldSet s) {
    double sum = 0.0;
    for (const auto& [set, mass] : m.focal()) {
        if ((set & ~s) == 0) sum += mass;
    }
    return sum;
}

double plausibility(const MassFunction& m, WorldSet s) {
    double sum = 0.0;
    for (const auto& [set, mass] : m.focal()) {
        if ((set & s) != 0) sum += mass;
    }
    return sum;
}

MassFunction pair_to_mass(const SupportPair& pair, std::size_t world, const Frame& frame) {
    if (!pair.valid()) throw DomainError("invalid support pair");
    WorldSet hyp = frame.singleton(world);
    WorldSet complement = frame.full() & ~hyp;
    std::map<WorldSet, double> focal;
    if (pair.lower > 0.0) focal[hyp] += pair.lower;
    if (pair.upper < 1.0) {
        if (complement == 0) {
            throw DomainError("negative evidence needs a complement world in the frame");
        }
        focal[complement] += 1.0 - pair.upper;
    }
    const double theta = pair.upper - pair.lower;
    if (theta > 0.0) focal[frame.full()] += theta;
    if (focal.empty()) focal[frame.full()] = 1.0;  // cannot happen for valid pairs, kept for safety
    return MassFunction(frame, std::move(focal));
}

std::pair<Frame, MassFunction> product_frame(const std::vector<Frame>& frames,
                                             const std::vector<std::vector<MassFunction>>& masses) {
    if (frames.empty()) throw DomainError("product of zero frames");
    if (masses.size() != frames.size()) {
        throw DomainError("need one mass list per frame");
    }
    std::vector<MassFunction> combined;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (masses[i].empty()) throw DomainError("per-frame mass list must not be empty");
        MassFunction acc = masses[i][0];
        if (!(acc.frame() == frames[i])) throw DomainError("mass function frame mismatch");
        for (std::size_t j = 1; j < masses[i].size(); ++j) {
            acc = dempster_combine(acc, masses[i][j]);
        }
        combined.push_back(std::move(acc));
    }
    if (frames.size() == 1) {
        return {frames[0], combined[0]};
    }

    std::size_t total = 1;
    for (const auto& f : frames) {
        if (total > Frame::max_worlds / f.size()) {
            throw DomainError("product frame exceeds " + std::to_string(Frame::max_worlds) + " worlds");
        }
        total *= f.size();
    }
    // world index: first frame varies slowest
    std::vector<std::string> labels(total);
    for (std::size_t w = 0; w < total; ++w) {
        std::size_t rest = w;
        std::vector<std::size_t> idx(frames.size());
        for (std::size_t i = frames.size(); i-- > 0;) {
            idx[i] = rest % frames[i].size();
            rest /= frames[i].size();
        }
        std::string label;
        for (std::size_t i = 0; i < frames.size(); ++i) {
            if (i) label += " & ";
            label += frames[i].worlds()[idx[i]];
        }
        labels[w] = std::move(label);
    }
    Frame product(std::move(labels));

    std::map<WorldSet, double> focal{{0, 1.0}};  // cylinder masks built frame by frame
    std::map<WorldSet, double> next;
    bool first = true;
    std::size_t stride = total;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        stride /= frames[i].size();
        next.clear();
        for (const auto& [accSet, accMass] : focal) {
            for (const auto& [set, mass] : combined[i].focal()) {
                WorldSet extended = 0;
                for (std::size_t w = 0; w < total; ++w) {
                    std::size_t component = (w / stride) % frames[i].size();
                    if (set & (WorldSet{1} << component)) extended |= WorldSet{1} << w;
                }
                WorldSet merged = first ? extended : (accSet & extended);
                next[merged] += accMass * mass;
            }
        }
        focal.swap(next);
        first = false;
    }
    return {product, MassFunction(product, std::move(focal))};
}

}  // namespace evtms
