#pragma once

#include "horocount/moebius.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace horo {

/// Closed interval [lo, hi] of exact rationals.
struct Interval {
    Rational lo;
    Rational hi;

    bool empty() const { return lo > hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Closed window in R (dim 1) or an axis-aligned box in R^2 (dim 2).
struct Window {
    int dim = 1;
    Interval x;
    Interval y;  // ignored when dim == 1

    static Window interval(Rational lo, Rational hi) { return {1, {std::move(lo), std::move(hi)}, {0, 0}}; }
    static Window box(Rational x0, Rational x1, Rational y0, Rational y1) {
        return {2, {std::move(x0), std::move(x1)}, {std::move(y0), std::move(y1)}};
    }
    bool empty() const { return x.empty() || (dim == 2 && y.empty()); }
    bool contains(const ExactPoint& p) const {
        return x.contains(p.re) && (dim == 1 ? sgn(p.im) == 0 : y.contains(p.im));
    }
    Window inflated(const Rational& margin) const;
};

enum class GroupName { Modular, Picard };

struct GroupPreset {
    GroupName id;
    std::string name;
    int boundary_dimension;
    double delta;
    int k_min;
    int k_max;
    std::vector<MoebiusMap> generators;
    Window fundamental_window;
    Horoball base_horoball;
    /// Largest ball radius treated as "sufficiently small".
    Rational small_scale_threshold;
};

/// "modular" (PSL(2,Z) on H^2) or "picard" (PSL(2,Z[i]) on H^3).
/// Throws UnknownGroup for anything else.
const GroupPreset& preset(std::string_view name);
const GroupPreset& preset(GroupName id);

}  // namespace horo
