#pragma once

#include "lamdyn/lamination.hpp"

namespace lamdyn {

struct PointKind {
    ClassKind kind;
    int valence;
};

class NotATree : public LaminationError {
public:
    explicit NotATree(const std::string& why) : LaminationError("NOT-A-TREE: " + why) {}
};

// Finite tree model of the quotient space at the stored depth.  Vertices are
// the classes; edges come from the nesting structure of class hulls: inside
// each hole of a class, the directly nested classes are chained in circular
// order and the first is attached to the holding class.  Root classes are
// chained the same way.  This always yields |V|-1 edges and refines the
// "no third class separates u from v" relation.
class DendriteApprox {
public:
    explicit DendriteApprox(Lamination lam);

    const Lamination& lamination() const { return lam_; }
    int depth() const { return lam_.depth(); }
    std::size_t vertex_count() const { return lam_.size(); }
    const std::vector<std::vector<int>>& adjacency() const { return adj_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    int tree_degree(int id) const { return (int)adj_[(std::size_t)id].size(); }

    // -1 when the image lies beyond the stored family
    int image_of(int id) const { return lam_.info(id).image_id; }
    bool frontier(int id) const { return image_of(id) == -1; }

    // parent in the hull-nesting forest, -1 for roots
    int nest_parent(int id) const { return nest_parent_[(std::size_t)id]; }

    // A chain-interior vertex has chain neighbors on both sides inside one of
    // its holes, a finite-model artifact: the tree splits that hole into two
    // components the circle picture cannot distinguish.  Saturated families
    // (every hole holding at most one direct nested class) have none.
    bool chain_interior(int id) const { return chain_interior_[(std::size_t)id]; }
    bool saturated() const;

    std::vector<int> arc_between(int u, int v) const;

    // True iff removing x disconnects y from z in the tree.  The hole-side
    // answer (y, z in different holes of x) is computed as well; it implies
    // the tree answer, and must match it unless x is chain-interior.
    bool separates(int x, int y, int z) const;

private:
    Lamination lam_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> nest_parent_;
    std::vector<char> chain_interior_;
};

DendriteApprox build_dendrite(Lamination L);

PointKind point_kind(const AngleClass& c);

// True iff every class in the forward orbit of c keeps at least two angles.
bool is_persistent_cutpoint(const AngleClass& c, int degree);

}  // namespace lamdyn
