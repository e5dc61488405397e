#pragma once

#include "lamdyn/angle.hpp"

namespace lamdyn {

// Unordered pair of circle points.
struct Chord {
    Angle a, b;
    Chord(Angle x, Angle y) : a(std::move(x)), b(std::move(y)) {
        // canonical order when both ends are exact
        if (a.exact() && b.exact() && b.value() < a.value()) std::swap(a, b);
    }
    bool degenerate(int precision = 0) const { return angle_eq(a, b, precision); }
};

// Counterclockwise arc from start to end.  start == end is the empty arc,
// unless full_minus_point is set, which denotes the whole circle minus {start}
// (the hole of a single-angle class).
struct OrientedArc {
    Angle start, end;
    bool full_minus_point = false;
    OrientedArc(Angle s, Angle e) : start(std::move(s)), end(std::move(e)) {}
    static OrientedArc full_minus(Angle p) {
        OrientedArc a(p, p);
        a.full_minus_point = true;
        return a;
    }
};

// True iff moving counterclockwise from a we meet b strictly before c.
// Angles must be pairwise distinct.  `precision` is the digit budget for
// stream comparisons (0 = exact operands only).
bool circular_order(const Angle& a, const Angle& b, const Angle& c, int precision = 0);

bool in_open_arc(const Angle& x, const OrientedArc& arc, int precision = 0);

// True iff the chords cross inside the disk.  Chords sharing an endpoint are
// unlinked by convention; degenerate chords link nothing.
bool chords_linked(const Chord& p, const Chord& q, int precision = 0);

}  // namespace lamdyn
