#include "psp/pwl.hpp"

#include "psp/errors.hpp"

#include <algorithm>

namespace psp {

PwlFunction PwlFunction::constant(Rat c) {
    PwlFunction f;
    f.offsets_[0] = std::move(c);
    return f;
}

PwlFunction PwlFunction::linear(Rat slope, Rat offset) {
    PwlFunction f;
    f.slopes_[0] = std::move(slope);
    f.offsets_[0] = std::move(offset);
    return f;
}

PwlFunction::PwlFunction(std::vector<Rat> breaks, std::vector<Rat> slopes,
                         std::vector<Rat> offsets)
    : breaks_(std::move(breaks)), slopes_(std::move(slopes)), offsets_(std::move(offsets)) {
    if (slopes_.size() != breaks_.size() + 1 || offsets_.size() != slopes_.size()) {
        throw InvariantError("piecewise function needs one more segment than breakpoints");
    }
    for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (!(breaks_[i] < breaks_[i + 1])) {
            throw InvariantError("breakpoints must be strictly increasing");
        }
    }
    for (size_t i = 0; i < breaks_.size(); ++i) {
        if (slopes_[i] * breaks_[i] + offsets_[i] != slopes_[i + 1] * breaks_[i] + offsets_[i + 1]) {
            throw InvariantError("discontinuity at breakpoint " + format_rational(breaks_[i]));
        }
    }
    canonicalize();
}

void PwlFunction::canonicalize() {
    // Continuity makes adjacent segments with equal slopes identical lines.
    size_t out = 0;
    for (size_t i = 0; i < breaks_.size(); ++i) {
        if (slopes_[i + 1] == slopes_[out]) continue;
        breaks_[out] = breaks_[i];
        slopes_[out + 1] = slopes_[i + 1];
        offsets_[out + 1] = offsets_[i + 1];
        ++out;
    }
    breaks_.resize(out);
    slopes_.resize(out + 1);
    offsets_.resize(out + 1);
}

Rat PwlFunction::operator()(const Rat& gamma) const {
    size_t i = std::upper_bound(breaks_.begin(), breaks_.end(), gamma) - breaks_.begin();
    return slopes_[i] * gamma + offsets_[i];
}

PwlFunction PwlFunction::operator+(const PwlFunction& other) const {
    std::vector<Rat> breaks;
    breaks.reserve(breaks_.size() + other.breaks_.size());
    std::merge(breaks_.begin(), breaks_.end(), other.breaks_.begin(), other.breaks_.end(),
               std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<Rat> slopes, offsets;
    slopes.reserve(breaks.size() + 1);
    offsets.reserve(breaks.size() + 1);
    size_t a = 0, b = 0;
    for (size_t i = 0; i <= breaks.size(); ++i) {
        slopes.push_back(slopes_[a] + other.slopes_[b]);
        offsets.push_back(offsets_[a] + other.offsets_[b]);
        if (i < breaks.size()) {
            if (a < breaks_.size() && breaks_[a] == breaks[i]) ++a;
            if (b < other.breaks_.size() && other.breaks_[b] == breaks[i]) ++b;
        }
    }
    return PwlFunction(std::move(breaks), std::move(slopes), std::move(offsets));
}

PwlFunction& PwlFunction::operator+=(const PwlFunction& other) {
    *this = *this + other;
    return *this;
}

PwlFunction PwlFunction::operator+(const Rat& shift) const {
    PwlFunction f = *this;
    for (auto& o : f.offsets_) o += shift;
    return f;
}

PwlFunction PwlFunction::operator-() const {
    PwlFunction f = *this;
    for (auto& s : f.slopes_) s = -s;
    for (auto& o : f.offsets_) o = -o;
    return f;
}

bool PwlFunction::is_non_decreasing() const {
    return std::all_of(slopes_.begin(), slopes_.end(), [](const Rat& s) { return s >= 0; });
}

bool PwlFunction::is_non_increasing() const {
    return std::all_of(slopes_.begin(), slopes_.end(), [](const Rat& s) { return s <= 0; });
}

bool PwlFunction::is_non_decreasing_on(const Rat& lo, const Rat& hi) const {
    size_t first = std::upper_bound(breaks_.begin(), breaks_.end(), lo) - breaks_.begin();
    for (size_t i = first; i < slopes_.size(); ++i) {
        if (i > 0 && breaks_[i - 1] >= hi) break;
        if (slopes_[i] < 0) return false;
    }
    return true;
}

PwlFunction positive_part(const PwlFunction& f) {
    const auto& breaks = f.breakpoints();
    const auto& slopes = f.slopes();
    const auto& offsets = f.offsets();

    // Candidate breakpoints: the original ones plus interior zero crossings.
    std::vector<Rat> cand;
    for (size_t i = 0; i < slopes.size(); ++i) {
        if (i > 0) cand.push_back(breaks[i - 1]);
        if (slopes[i] == 0) continue;
        Rat root = -offsets[i] / slopes[i];
        bool above = i == 0 || breaks[i - 1] < root;
        bool below = i == slopes.size() - 1 || root < breaks[i];
        if (above && below) cand.push_back(root);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    // Within each cell the sign of f is constant, so max{f, 0} is linear.
    std::vector<Rat> slopes_out, offsets_out;
    for (size_t i = 0; i <= cand.size(); ++i) {
        Rat probe;
        if (cand.empty()) {
            probe = 0;
        } else if (i == 0) {
            probe = cand[0] - 1;
        } else if (i == cand.size()) {
            probe = cand.back() + 1;
        } else {
            probe = (cand[i - 1] + cand[i]) / 2;
        }
        if (f(probe) > 0) {
            size_t seg = std::upper_bound(breaks.begin(), breaks.end(), probe) - breaks.begin();
            slopes_out.push_back(slopes[seg]);
            offsets_out.push_back(offsets[seg]);
        } else {
            slopes_out.push_back(Rat(0));
            offsets_out.push_back(Rat(0));
        }
    }
    return PwlFunction(std::move(cand), std::move(slopes_out), std::move(offsets_out));
}

PwlFunction vertex_potential(const Rat& g_single, const OptGamma& dropout) {
    if (!dropout) return PwlFunction::linear(Rat(-1), g_single);
    // Constant g_single - dropout below the dropout threshold, slope -1 above.
    return PwlFunction({*dropout}, {Rat(0), Rat(-1)}, {g_single - *dropout, g_single});
}

Rat solve_crossing(const PwlFunction& lhs, const PwlFunction& rhs, const Rat& lo, const Rat& hi) {
    if (lo > hi) throw InvariantError("crossing interval is empty");
    PwlFunction diff = lhs + (-rhs);
    if (diff(lo) > 0 || diff(hi) < 0) {
        throw InvariantError("no crossing in [" + format_rational(lo) + ", " + format_rational(hi) +
                             "]: lhs(lo)=" + format_rational(lhs(lo)) +
                             " rhs(lo)=" + format_rational(rhs(lo)) +
                             " lhs(hi)=" + format_rational(lhs(hi)) +
                             " rhs(hi)=" + format_rational(rhs(hi)));
    }
    if (!diff.is_non_decreasing_on(lo, hi)) {
        throw InvariantError("lhs - rhs is not non-decreasing on the crossing interval");
    }
    if (diff(lo) == 0) return lo;

    // Walk cells left to right; the first sign change pins the crossing.
    const auto& breaks = diff.breakpoints();
    const auto& slopes = diff.slopes();
    const auto& offsets = diff.offsets();
    Rat left = lo;
    size_t seg = std::upper_bound(breaks.begin(), breaks.end(), lo) - breaks.begin();
    for (;; ++seg) {
        Rat right = seg < breaks.size() && breaks[seg] < hi ? breaks[seg] : hi;
        if (diff(right) >= 0) {
            // Crossing inside (left, right]: the segment has positive slope
            // here, because diff(left) < 0 <= diff(right).
            return -offsets[seg] / slopes[seg];
        }
        left = right;
        if (right == hi) break;
    }
    throw InvariantError("crossing scan fell off the interval end");
}

} // namespace psp
