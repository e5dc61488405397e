#pragma once

#include "lamdyn/dendrite.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lamdyn {

// A query or orbit left the stored depth; deepening the pullback resolves it.
class Frontier : public LaminationError {
public:
    explicit Frontier(const std::string& what) : LaminationError("FRONTIER: " + what) {}
};

class InsufficientWitnesses : public LaminationError {
public:
    explicit InsufficientWitnesses(const std::string& what)
        : LaminationError("INSUFFICIENT-WITNESSES: " + what) {}
};

enum class LimitType { arc, non_separating, landing };
const char* limit_type_name(LimitType t);

// One accumulation target of an orbit, with the iterate indices that approach
// it.  For eventually periodic seeds the witnesses hit the target exactly and
// seed_preperiod records where the orbit enters its cycle; stream orbits carry
// the witnessed iterate classes for later classification.
struct LimitPointRecord {
    AngleClass target;
    std::vector<int> witnesses;
    std::vector<AngleClass> witness_classes;
    bool exact = false;
    int seed_preperiod = -1;
    // hull edge of the target approached from one side (two angles), the bud
    // angle (one), or empty when no one-sided approach was established
    std::vector<Angle> side_edge;
};

struct LimitVerdict {
    LimitType type;
    bool at_budget;
};

std::vector<LimitPointRecord> omega_limit(const Lamination& L, const AngleClass& seed,
                                          int budget, int precision);

// Arc type: the witnessed images approach the target through one hole,
// each separating its predecessor from the target.  Needs three usable
// witnesses; exact orbits short-circuit to landing (preperiodic) or arc
// (periodic, by convention).  Fills rec.side_edge on an arc verdict.
LimitVerdict classify_limit_point(LimitPointRecord& rec, int precision);

struct PeriodicCutpointScan {
    std::vector<int> cutpoints;  // stored ids: |class| >= 2, preperiod 0, period <= p
    std::vector<std::vector<Rational>> candidates;  // angle cycles not covered by storage
};

PeriodicCutpointScan periodic_cutpoints(const Lamination& L, int max_period);

// Smallest angle distance between members of two classes.
Rational class_distance(const AngleClass& a, const AngleClass& b, int precision);

// Bounded-horizon persistence for classes carrying stream angles: no collapse
// observed within `horizon` images.
bool is_persistent_cutpoint_bounded(const AngleClass& c, int degree, int horizon,
                                    int precision);

struct SeedDistanceRow {
    std::string seed;
    std::string target;
    bool eventually_periodic = false;
    std::vector<Rational> distances;  // nearest periodic cutpoint, one per period bound
};

struct VerificationReport {
    std::string theorem;
    int depth = 0;
    int budget = 0;
    int precision = 0;
    std::vector<int> p_list;
    std::vector<SeedDistanceRow> rows;
    std::vector<std::string> notes;
    bool passed = false;
    std::string str() const;
};

// For each persistent-cutpoint seed, distance from every omega-limit target to
// the nearest periodic cutpoint at each period bound.  Passes when eventually
// periodic rows are exactly zero and stream rows weakly decrease.
VerificationReport verify_recurrence_theorems(const Lamination& L,
                                              const std::vector<AngleClass>& seeds,
                                              const std::vector<int>& p_list, int budget,
                                              int precision);

struct ScramblingResult {
    bool ok = true;
    std::vector<int> violations;  // attachment vertices whose image falls away from D1
};

// image_map[v] is the vertex id of the image of v, or -1 when unknown.
std::vector<int> stored_image_map(const DendriteApprox& D);

// For each non-fixed attachment vertex e of the subtree induced by d1, the
// image of e must land in a component of the tree minus e that meets d1.
ScramblingResult boundary_scrambling_check(const DendriteApprox& D, const std::vector<int>& d1,
                                           const std::vector<int>& image_map);

struct FixedPointResult {
    int vertex = -1;
    std::pair<int, int> edge{-1, -1};
    bool cutpoint = false;
    std::string note;
};

// Exhaustive fixed-vertex scan over d1, preferring cutpoint classes; when only
// an edge brackets a fixed point (both ends mapped outward across themselves),
// reports FIXED-POINT-BELOW-DEPTH with that edge.
FixedPointResult fixed_cutpoint_search(const DendriteApprox& D, const std::vector<int>& d1,
                                       const std::vector<int>& image_map);

struct CoreResult {
    std::vector<int> vertices;
    bool no_critical_core = false;
    std::vector<std::string> notes;
};

// Smallest stored subtree that is forward invariant and swallows the critical
// orbits: seeded with the periodic cycles of the critical classes, closed
// under images and tree arcs until stable.
CoreResult dynamical_core(const DendriteApprox& D);

// Cutpoint vertices whose forward orbit never reaches the core.
std::vector<int> absorption_failures(const DendriteApprox& D, const std::vector<int>& core);

}  // namespace lamdyn
