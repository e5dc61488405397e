#include "lamdyn/circle.hpp"

namespace lamdyn {

bool circular_order(const Angle& a, const Angle& b, const Angle& c, int precision) {
    auto ab = compare_angles(a, b, precision);
    auto bc = compare_angles(b, c, precision);
    auto ca = compare_angles(c, a, precision);
    if (ab == 0 || bc == 0 || ca == 0)
        throw std::invalid_argument("circular_order: angles must be pairwise distinct");
    // b strictly between a and c in ccw order <=> the linear representatives
    // satisfy a<b<c, b<c<a or c<a<b
    bool lt_ab = ab < 0, lt_bc = bc < 0, lt_ca = ca < 0;
    return (lt_ab && lt_bc) || (lt_bc && lt_ca) || (lt_ca && lt_ab);
}

bool in_open_arc(const Angle& x, const OrientedArc& arc, int precision) {
    if (arc.full_minus_point) return !angle_eq(x, arc.start, precision);
    if (angle_eq(arc.start, arc.end, precision)) return false;  // empty arc
    if (angle_eq(x, arc.start, precision) || angle_eq(x, arc.end, precision)) return false;
    return circular_order(arc.start, x, arc.end, precision);
}

bool chords_linked(const Chord& p, const Chord& q, int precision) {
    if (p.degenerate(precision) || q.degenerate(precision)) return false;
    if (angle_eq(p.a, q.a, precision) || angle_eq(p.a, q.b, precision) ||
        angle_eq(p.b, q.a, precision) || angle_eq(p.b, q.b, precision))
        return false;
    OrientedArc side(p.a, p.b);
    return in_open_arc(q.a, side, precision) != in_open_arc(q.b, side, precision);
}

}  // namespace lamdyn
