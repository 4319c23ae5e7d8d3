#pragma once

#include <vector>

#include "liouville/errors.hpp"
#include "liouville/geometry.hpp"
#include "liouville/kernels.hpp"

namespace liouville {

// The screening contour gamma: enters horizontally from i t_1 - inf, visits
// i t_1, ..., i t_k in label order along the imaginary axis (changing
// direction as needed), and exits horizontally from i t_k.
//
// Contour parameter convention: visit j (1-based) sits at parameter j; the
// left tail covers (-inf, 1), the vertical segment from visit r to r+1 covers
// (r, r+1), and the right tail covers (k, inf).

enum class SegmentKind { left_tail, vertical, right_tail };

struct ContourSegment {
    SegmentKind kind;
    complex start;
    complex end;
    int orientation; // +1 upward / rightward, -1 downward
};

struct MarkedVisit {
    int label;    // 1-based insertion label
    double param; // position on the contour
    complex position;
};

struct Contour {
    std::vector<ContourSegment> segments;
    std::vector<MarkedVisit> marked_visits;
};

// Points are listed in label order.
inline Contour build_contour(const std::vector<CylinderPoint>& points) {
    if (points.empty()) throw domain_error("build_contour: need at least one insertion");
    const int k = static_cast<int>(points.size());
    Contour c;
    const complex i_unit(0.0, 1.0);
    c.segments.push_back(
        {SegmentKind::left_tail, i_unit * points.front().t - 1e308, i_unit * points.front().t, +1});
    for (int r = 0; r + 1 < k; ++r) {
        const double t0 = points[r].t, t1 = points[r + 1].t;
        if (t0 == t1) continue; // empty vertical piece
        c.segments.push_back({SegmentKind::vertical, i_unit * t0, i_unit * t1,
                              t1 > t0 ? +1 : -1});
    }
    c.segments.push_back(
        {SegmentKind::right_tail, i_unit * points.back().t, i_unit * points.back().t + 1e308, +1});
    for (int j = 0; j < k; ++j)
        c.marked_visits.push_back({j + 1, static_cast<double>(j + 1), i_unit * points[j].t});
    return c;
}

// A point on the contour tube M_gamma, carrying enough data to resolve the
// time-ordering: gamma is not injective, so the contour parameter (and the
// label, for marked visits) is part of the identity of the point.
struct ContourPoint {
    complex tau;     // complex time coordinate (tails have real part)
    double x;        // spatial coordinate
    double param;    // contour parameter
    bool is_visit;   // marked external visit?
    int label = 0;   // 1-based label for visits

    static ContourPoint visit(int label, double t, double x) {
        return {complex(0.0, t), wrap2(x), static_cast<double>(label), true, label};
    }
    static ContourPoint screening(complex tau, double x, double param) {
        return {tau, wrap2(x), param, false, 0};
    }
};

// True if a precedes b along the contour. External-external pairs order by
// label; ties between a screening point and a visit sit on a null set and are
// broken in favor of the visit.
inline bool contour_precedes(const ContourPoint& a, const ContourPoint& b) {
    if (a.is_visit && b.is_visit) return a.label < b.label;
    if (a.param != b.param) return a.param < b.param;
    return a.is_visit;
}

// g(T(a - b)): the Green's function of the time-ordered difference, i.e.
// later-on-contour minus earlier. Symmetric in its two operands.
inline complex time_ordered_g(const ContourPoint& a, const ContourPoint& b,
                              double delta_lc = 1e-9) {
    const ContourPoint& later = contour_precedes(a, b) ? b : a;
    const ContourPoint& earlier = contour_precedes(a, b) ? a : b;
    return green_reflected(later.tau - earlier.tau, later.x - earlier.x, delta_lc);
}

} // namespace liouville
