#ifndef EVTMS_SUPPORT_HPP
#define EVTMS_SUPPORT_HPP

#include <string>

#include "evtms/errors.hpp"

namespace evtms {

/// Belief interval attached to facts, rules, and query answers.
/// `lower` is the committed support for the proposition, `1 - upper` the
/// committed support for its negation; `upper - lower` is uncommitted.
struct SupportPair {
    double lower = 0.0;
    double upper = 1.0;

    bool valid() const {
        return lower >= 0.0 && lower <= upper && upper <= 1.0;
    }
    friend bool operator==(const SupportPair&, const SupportPair&) = default;
};

/// Normalizers at or below this are treated as total conflict.
inline constexpr double k_conflict_tolerance = 1e-12;

/// Validates and returns the pair; throws DomainError otherwise.
SupportPair checked_pair(double lower, double upper);

/// Propagates support across one inference step:
///   [Sl(P|Q) * Sl(Q), 1 - (1 - Su(P|Q)) * Sl(Q)].
SupportPair slp_propagate(const SupportPair& rule, const SupportPair& antecedent);

/// Combines two independent supports for the same proposition.  Equal to
/// Dempster's rule on the two-element frame {P, not P}, normalizer
///   K = 1 - S1*(1 - U2) - S2*(1 - U1).
/// Throws ConflictError when K falls below the conflict tolerance.
SupportPair slp_combine(const SupportPair& a, const SupportPair& b);

/// Round to `decimals` places, ties to even.
double round_half_even(double value, int decimals);

/// Fixed-point decimal rendering with half-even rounding, e.g. "0.167".
std::string format_number(double value, int decimals);

/// "[l, u]" rendering used by all text output.
std::string format_support(const SupportPair& pair, int decimals);

}  // namespace evtms

#endif
