#pragma once

#include "lamdyn/circle.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lamdyn {

enum class ClassKind { bud, leaf, gap };

inline const char* kind_name(ClassKind k) {
    switch (k) {
        case ClassKind::bud: return "endpoint";
        case ClassKind::leaf: return "cutpoint";
        case ClassKind::gap: return "branchpoint";
    }
    return "?";
}

// Finite nonempty set of circle points, kept in circular (ascending) order.
// Stored lamination classes are always exact; seed classes may carry streams
// and are then ordered at a caller-supplied digit precision.
class AngleClass {
public:
    static AngleClass of_exact(std::vector<Angle> angles);
    static AngleClass of_rationals(std::initializer_list<Rational> rs);
    static AngleClass with_precision(std::vector<Angle> angles, int precision);

    std::size_t size() const { return angles_.size(); }
    const std::vector<Angle>& angles() const { return angles_; }
    const Angle& at(std::size_t i) const { return angles_[i]; }
    bool exact() const;

    AngleClass image(int degree, int precision = 0) const;
    bool is_critical(int degree, int precision = 0) const {
        return image(degree, precision).size() < size();
    }
    ClassKind kind() const {
        return size() == 1 ? ClassKind::bud : size() == 2 ? ClassKind::leaf : ClassKind::gap;
    }

    // Complementary arcs between circularly consecutive angles; a bud's hole
    // is the full circle minus the point.
    std::vector<OrientedArc> holes() const;
    // Hull edges: none for a bud, the single chord for a leaf, the polygon
    // sides (including the wrap-around edge) for a gap.
    std::vector<Chord> hull_chords() const;

    // Index of the hole containing x, or nullopt when x is one of the angles.
    // Hole i is the arc starting at angle i.
    std::optional<std::size_t> hole_of(const Angle& x, int precision = 0) const;

    // True iff the two classes do not interleave on the circle (no chord of
    // one crosses a chord of the other).  Exact for exact classes.
    static bool unlinked(const AngleClass& u, const AngleClass& v, int precision = 0);

    // Canonical key (exact classes only).
    std::vector<Rational> key() const;

    bool contains_exact(const Rational& r) const;
    std::string str() const;

private:
    std::vector<Angle> angles_;
};

bool operator==(const AngleClass& a, const AngleClass& b);

struct ClassInfo {
    AngleClass cls;
    int generation = 0;      // 0 = forward closure of the generators
    int image_id = -1;       // index of sigma(cls) among stored classes, -1 = frontier
    int preperiod = -1;      // class-orbit preperiod/period, -1 when unknown (frontier)
    int period = -1;
    bool generator = false;
};

class LaminationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AmbiguousPullback : public LaminationError {
public:
    AmbiguousPullback(const std::string& parent, int generation, int count)
        : LaminationError("AMBIGUOUS-PULLBACK: preimage of " + parent + " at generation " +
                          std::to_string(generation) +
                          (count ? " admits " + std::to_string(count) + " unlinked partitions"
                                 : " admits no valid partition")),
          parent_repr(parent), generation(generation), candidate_count(count) {}
    std::string parent_repr;
    int generation;
    int candidate_count;  // 0 = obstructed, >=2 = ambiguous
};

class ForwardOrbitDiverges : public LaminationError {
public:
    explicit ForwardOrbitDiverges(const std::string& what)
        : LaminationError("FORWARD-ORBIT-DIVERGES: " + what) {}
};

class LinkedGenerators : public LaminationError {
public:
    explicit LinkedGenerators(const std::string& witness)
        : LaminationError("generators not pairwise unlinked: " + witness), witness(witness) {}
    std::string witness;
};

// Interval-stabbing index over the hull edges of stored classes: a candidate
// chord conflicts iff some stored edge has exactly one endpoint strictly
// inside the candidate's span.
class ChordIndex {
public:
    void insert(const AngleClass& c);
    // true iff chord {x,y} crosses some indexed edge
    bool crosses(const Rational& x, const Rational& y) const;
    bool class_conflicts(const AngleClass& c) const;

private:
    std::map<Rational, std::vector<Rational>> ends_;  // endpoint -> partners
};

class Lamination {
public:
    Lamination(int degree, int depth) : degree_(degree), depth_(depth) {}

    int degree() const { return degree_; }
    int depth() const { return depth_; }
    std::size_t size() const { return classes_.size(); }
    const ClassInfo& info(int id) const { return classes_[(std::size_t)id]; }
    const std::vector<ClassInfo>& classes() const { return classes_; }
    const std::vector<AngleClass>& generators() const { return generators_; }
    const ChordIndex& chord_index() const { return index_; }

    // id of the stored class with this key, or -1
    int find(const AngleClass& c) const;
    int find_key(const std::vector<Rational>& key) const;
    // ids of stored classes whose image is `id`
    const std::vector<int>& siblings_of(int id) const;

    // id of the stored class containing the angle, or -1
    int class_of_angle(const Rational& a) const;

    // Appends a class; enforces disjointness from every stored class.
    int add_class(AngleClass c, int generation, bool generator);

    // Records that sigma maps class `id` onto stored class `img`.
    void set_image(int id, int img) {
        classes_[(std::size_t)id].image_id = img;
        siblings_[img].push_back(id);
    }

    void set_generators(std::vector<AngleClass> gens) { generators_ = std::move(gens); }
    void compute_orbit_data();

    // ids in canonical (key) order, for deterministic listings
    std::vector<int> sorted_ids() const;

private:
    int degree_;
    int depth_;
    std::vector<ClassInfo> classes_;
    std::vector<AngleClass> generators_;
    std::map<std::vector<Rational>, int> by_key_;
    std::map<Rational, int> by_angle_;
    std::map<int, std::vector<int>> siblings_;
    ChordIndex index_;
    static const std::vector<int> no_siblings_;
};

struct AxiomViolation {
    std::string axiom;  // E1-finite, E2, E3, D1, D2, D3, D4
    std::string witness;
};

struct AxiomReport {
    std::vector<AxiomViolation> violations;
    std::vector<std::string> notes;
    bool passed() const { return violations.empty(); }
    std::string str() const;
};

// sigma image of a class (pure angle-set map)
AngleClass class_image(const AngleClass& c, int degree, int precision = 0);

bool is_critical(const AngleClass& c, int degree, int precision = 0);

// Checks E2/E3/D1/D2/D3/D4 on the stored collection; E1 only as the labelled
// finite surrogate.  The naive all-pairs linkage scan is NOT used here (it is
// the independent test oracle); unlinkedness goes through the chord index.
AxiomReport check_axioms(const Lamination& L);

// Forward closure of the generators plus `depth` generations of sibling
// preimage classes.  Throws LinkedGenerators / ForwardOrbitDiverges /
// AmbiguousPullback.
Lamination pullback_closure(int degree, const std::vector<AngleClass>& generators, int depth);

// (preperiod, period) of the class orbit under class_image; exact angles only.
std::pair<int, int> orbit_portrait(const AngleClass& c, int degree);

ClassKind classify_class(const AngleClass& c);

}  // namespace lamdyn
