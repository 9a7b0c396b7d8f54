#pragma once

#include "psp/rational.hpp"

#include <vector>

namespace psp {

// Continuous piecewise-linear function of gamma over (-inf, +inf), with exact
// rational breakpoints and segment coefficients. Canonical form: breakpoints
// strictly increasing and no two adjacent segments share a slope (continuity
// then forces them to be the same line, so they are merged).
//
// Segment i covers:
//   i == 0:       (-inf, breaks[0]]
//   0 < i < k:    [breaks[i-1], breaks[i]]
//   i == k:       [breaks[k-1], +inf)
// and evaluates to slopes[i] * gamma + offsets[i].
class PwlFunction {
public:
    PwlFunction() : slopes_{Rat(0)}, offsets_{Rat(0)} {}

    static PwlFunction constant(Rat c);
    static PwlFunction linear(Rat slope, Rat offset);

    // The pieces must agree at every breakpoint; throws InvariantError if the
    // sequence is not strictly increasing or the function is discontinuous.
    PwlFunction(std::vector<Rat> breaks, std::vector<Rat> slopes, std::vector<Rat> offsets);

    Rat operator()(const Rat& gamma) const;

    PwlFunction operator+(const PwlFunction& other) const;
    PwlFunction& operator+=(const PwlFunction& other);
    PwlFunction operator+(const Rat& shift) const;
    PwlFunction operator-() const;

    bool operator==(const PwlFunction& other) const = default;

    const std::vector<Rat>& breakpoints() const { return breaks_; }
    const std::vector<Rat>& slopes() const { return slopes_; }
    const std::vector<Rat>& offsets() const { return offsets_; }

    bool is_non_decreasing() const;
    bool is_non_increasing() const;

    // True when every slope is non-negative over [lo, hi] (the restriction of
    // the function to that interval is non-decreasing).
    bool is_non_decreasing_on(const Rat& lo, const Rat& hi) const;

private:
    void canonicalize();

    std::vector<Rat> breaks_;
    std::vector<Rat> slopes_;  // breaks_.size() + 1 entries
    std::vector<Rat> offsets_; // breaks_.size() + 1 entries
};

// Pointwise max{f, 0}. Inserts breakpoints at the zero crossings.
PwlFunction positive_part(const PwlFunction& f);

// The per-vertex potential gamma |-> g_single - max{gamma, dropout}, where a
// nullopt dropout means minus infinity (the potential is then the plain line
// g_single - gamma). It is non-increasing with at most one breakpoint.
PwlFunction vertex_potential(const Rat& g_single, const OptGamma& dropout);

// Smallest gamma in [lo, hi] with lhs(gamma) == rhs(gamma), for a
// non-decreasing difference lhs - rhs. Preconditions: lhs(lo) <= rhs(lo) and
// lhs(hi) >= rhs(hi) (throws InvariantError quoting all four endpoint values
// otherwise), and lhs - rhs non-decreasing on [lo, hi]. When the two sides
// agree on a whole subinterval, the left end of that subinterval is returned.
Rat solve_crossing(const PwlFunction& lhs, const PwlFunction& rhs, const Rat& lo, const Rat& hi);

} // namespace psp
