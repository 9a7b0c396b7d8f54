#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace psp {

// Exact rational scalar. All weights, capacities, flows and gamma thresholds
// use this type; nothing in the solver touches floating point.
using Rat = mpq_class;

// Threshold that may be "minus infinity" (nullopt). Used for per-vertex
// drop-out values and half-open interval ends.
using OptGamma = std::optional<Rat>;

// Accepts "7", "-3", "3/4", "0.5", "-1.25". Returns nullopt on anything else
// (including zero or negative denominators).
std::optional<Rat> parse_rational(std::string_view text);

// Canonical form: lowest terms, "p/q" only when q != 1, no leading '+'.
std::string format_rational(const Rat& value);

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// max{a, b} where nullopt acts as minus infinity.
inline OptGamma max_gamma(const OptGamma& a, const OptGamma& b) {
    if (!a) return b;
    if (!b) return a;
    return *a >= *b ? a : b;
}

} // namespace psp
