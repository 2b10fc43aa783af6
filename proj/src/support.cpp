#include "evtms/support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace evtms {

namespace {

double clamp01(double v) {
    return std::min(1.0, std::max(0.0, v));
}

void require_valid(const SupportPair& p, const char* what) {
    if (!p.valid()) {
        throw DomainError(std::string(what) + " must satisfy 0 <= lower <= upper <= 1, got [" +
                          std::to_string(p.lower) + ", " + std::to_string(p.upper) + "]");
    }
}

}  // namespace

SupportPair checked_pair(double lower, double upper) {
    SupportPair p{lower, upper};
    require_valid(p, "support pair");
    return p;
}

SupportPair slp_propagate(const SupportPair& rule, const SupportPair& antecedent) {
    require_valid(rule, "rule strength");
    require_valid(antecedent, "antecedent support");
    const double s = rule.lower * antecedent.lower;
    const double u = 1.0 - (1.0 - rule.upper) * antecedent.lower;
    return {s, u};
}

SupportPair slp_combine(const SupportPair& a, const SupportPair& b) {
    require_valid(a, "support pair");
    require_valid(b, "support pair");
    const double s1 = a.lower, u1 = a.upper;
    const double s2 = b.lower, u2 = b.upper;
    const double k = 1.0 - s1 * (1.0 - u2) - s2 * (1.0 - u1);
    if (k <= k_conflict_tolerance) {
        throw ConflictError("totally conflicting supports: normalizer K = " + std::to_string(k));
    }
    double s = (s1 * u2 + s2 * u1 - s1 * s2) / k;
    double u = 1.0 - ((1.0 - u1) * (1.0 - s2) + (1.0 - u2) * (u1 - s1)) / k;
    s = clamp01(s);
    u = clamp01(u);
    if (s > u) s = u;  // guard against rounding at the interval boundary
    return {s, u};
}

double round_half_even(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    // nearbyint under the default rounding mode resolves ties to even
    return std::nearbyint(value * scale) / scale;
}

std::string format_number(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_half_even(value, decimals));
    return buf;
}

std::string format_support(const SupportPair& pair, int decimals) {
    return "[" + format_number(pair.lower, decimals) + ", " + format_number(pair.upper, decimals) + "]";
}

}  // namespace evtms
