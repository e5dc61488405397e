#include <doctest.h>

#include "lamdyn/circle.hpp"

#include <random>

using namespace lamdyn;

namespace {
Angle A(std::int64_t p, std::int64_t q) { return Angle::from_rational(Rational(p, q)); }
}

TEST_CASE("circular order of three points") {
    CHECK(circular_order(A(1, 8), A(1, 4), A(1, 2)));
    CHECK_FALSE(circular_order(A(1, 8), A(1, 2), A(1, 4)));
    CHECK(circular_order(A(3, 4), A(7, 8), A(1, 8)));
    CHECK(circular_order(A(7, 8), A(1, 8), A(1, 2)));
    CHECK_THROWS_AS(circular_order(A(1, 2), A(1, 2), A(3, 4)), std::invalid_argument);
}

TEST_CASE("open arc membership") {
    OrientedArc arc(A(3, 4), A(1, 4));  // wraps through 0
    CHECK(in_open_arc(A(7, 8), arc));
    CHECK(in_open_arc(A(1, 8), arc));
    CHECK(in_open_arc(A(0, 1), arc));
    CHECK_FALSE(in_open_arc(A(1, 2), arc));
    CHECK_FALSE(in_open_arc(A(3, 4), arc));
    CHECK_FALSE(in_open_arc(A(1, 4), arc));

    OrientedArc plain(A(1, 4), A(3, 4));
    CHECK(in_open_arc(A(1, 2), plain));
    CHECK_FALSE(in_open_arc(A(7, 8), plain));

    OrientedArc empty(A(1, 3), A(1, 3));
    CHECK_FALSE(in_open_arc(A(2, 3), empty));

    OrientedArc punctured = OrientedArc::full_minus(A(1, 3));
    CHECK(in_open_arc(A(2, 3), punctured));
    CHECK_FALSE(in_open_arc(A(1, 3), punctured));
}

TEST_CASE("chord crossing basics") {
    CHECK(chords_linked(Chord(A(0, 1), A(1, 2)), Chord(A(1, 4), A(3, 4))));
    CHECK_FALSE(chords_linked(Chord(A(0, 1), A(1, 4)), Chord(A(1, 2), A(3, 4))));
    CHECK_FALSE(chords_linked(Chord(A(0, 1), A(1, 2)), Chord(A(1, 2), A(3, 4))));
    CHECK_FALSE(chords_linked(Chord(A(1, 3), A(1, 3)), Chord(A(0, 1), A(1, 2))));
    CHECK_FALSE(chords_linked(Chord(A(1, 8), A(7, 8)), Chord(A(1, 4), A(3, 4))));  // nested
}

TEST_CASE("crossing matches the interleaving rule") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::int64_t> num(0, 96);
    for (int i = 0; i < 3000; ++i) {
        std::int64_t a = num(rng), b = num(rng), c = num(rng), d = num(rng);
        if (a == b || c == d) continue;
        Chord p(A(a, 97), A(b, 97)), q(A(c, 97), A(d, 97));
        bool expect;
        if (c == a || c == b || d == a || d == b) {
            expect = false;  // shared endpoint convention
        } else {
            std::int64_t lo = std::min(a, b), hi = std::max(a, b);
            bool cin = lo < c && c < hi, din = lo < d && d < hi;
            expect = cin != din;
        }
        CHECK(chords_linked(p, q, 0) == expect);
        CHECK(chords_linked(q, p, 0) == expect);  // symmetric
        // rotating every endpoint by the same step changes nothing
        auto rot = [&](std::int64_t x) { return A((x + 31) % 97, 97); };
        CHECK(chords_linked(Chord(rot(a), rot(b)), Chord(rot(c), rot(d)), 0) == expect);
    }
}
