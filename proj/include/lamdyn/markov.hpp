#pragma once

#include <gmpxx.h>

#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamdyn {

struct TreeMapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Period symbol: a finite least period, or the 2^infinity marker sitting
// between the even multiples of odd numbers and the pure powers of two.
struct SharkType {
    long period = 1;
    bool two_inf = false;

    static SharkType finite(long k) {
        if (k < 1) throw std::invalid_argument("period must be positive");
        SharkType s;
        s.period = k;
        return s;
    }
    static SharkType two_infinity() {
        SharkType s;
        s.two_inf = true;
        return s;
    }
    std::string str() const { return two_inf ? "2^infinity" : std::to_string(period); }
    bool operator==(const SharkType& o) const {
        return two_inf == o.two_inf && (two_inf || period == o.period);
    }
    bool operator!=(const SharkType& o) const { return !(*this == o); }
};

// strict order: true iff m comes strictly before n (m forces n)
bool sharkovskiy_less(const SharkType& m, const SharkType& n);

// membership of n in the tail set of k (k itself included when finite)
bool sh_set_contains(const SharkType& k, long n);

// A point of the metric tree: offset t along edge `edge`, measured from the
// edge's u endpoint.  Offsets 0 and len denote the vertices themselves.
struct TreePoint {
    int edge = 0;
    mpq_class t = 0;
};

// Continuous self-map of a finite metric tree, linear on finitely many
// subdivision pieces per edge.  A piece [a, b] sweeps the unique tree path
// from `from` to `to` at constant speed; a == b is not allowed but from ==
// to is (the piece collapses to a point).  Vertices map to vertices.
class MarkovTreeMap {
  public:
    struct Edge {
        int u, v;
        mpq_class len;
    };
    struct Piece {
        mpq_class a, b;
        TreePoint from, to;
    };

    MarkovTreeMap(int vertices, std::vector<Edge> edges, std::vector<int> vertex_image,
                  std::vector<std::vector<Piece>> pieces);

    int vertex_count() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& vertex_image() const { return vertex_image_; }
    const std::vector<std::vector<Piece>>& pieces() const { return pieces_; }
    const std::vector<std::vector<std::pair<int, bool>>>& adjacency() const { return adj_; }

    TreePoint vertex_point(int v) const;
    bool is_vertex(const TreePoint& p, int* v = nullptr) const;
    // canonical form: vertex offsets snapped, vertex points moved to the
    // lowest incident edge
    TreePoint normalize(const TreePoint& p) const;
    TreePoint eval(const TreePoint& p) const;

    // segments (edge, t_from, t_to) of the unique path between two points,
    // contiguous, each within one edge
    struct Path {
        struct Seg {
            int edge;
            mpq_class t0, t1;
        };
        std::vector<Seg> segs;
        mpq_class length = 0;
    };
    Path path_between(const TreePoint& x, const TreePoint& y) const;
    TreePoint point_at(const Path& path, const mpq_class& s) const;

  private:
    int vertices_;
    std::vector<Edge> edges_;
    std::vector<int> vertex_image_;
    std::vector<std::vector<Piece>> pieces_;
    std::vector<std::vector<std::pair<int, bool>>> adj_;  // vertex -> (edge, is_u_end)
};

// total order on points for exact dedup across edge/vertex representations
int tree_point_compare(const MarkovTreeMap& f, const TreePoint& x, const TreePoint& y);

// Exact fixed-point data of f^p.  Pieces of the iterate that coincide with
// the identity contribute whole segments instead of isolated points.
struct FixedSet {
    std::vector<TreePoint> points;
    std::vector<std::pair<TreePoint, TreePoint>> segments;
};
FixedSet fixed_points(const MarkovTreeMap& f, int p);

struct PeriodSet {
    std::set<long> realized;
    bool down_set = false;
    std::optional<SharkType> classification;
};
// least periods up to P by exact per-piece root solving on f, f^2, ..., f^P
PeriodSet exact_periods(const MarkovTreeMap& f, int P);

// canned maps
MarkovTreeMap interval_markov_map(const std::vector<mpq_class>& breakpoints,
                                  const std::vector<mpq_class>& values);
MarkovTreeMap identity_interval_map();
MarkovTreeMap tent_map();
// tent capped at height h; h must have a finite forward orbit under the
// capped map so that the orbit closure supplies the Markov vertex set
MarkovTreeMap truncated_tent(const mpq_class& h, int orbit_bound = 64);
MarkovTreeMap stefan_map(int k);
MarkovTreeMap star_rotation(int legs);
MarkovTreeMap random_markov_map(std::mt19937& rng);

// max over samples of the exact distance from late iterates to the periodic
// set up to each bound in P_list
struct CenterReport {
    std::vector<int> p_list;
    std::vector<mpq_class> max_distance;
    int samples = 0;
    int budget = 0;
    mpq_class eps = 0;
    bool passed = false;
    std::string str() const;
};
CenterReport center_vs_periodic_closure(const MarkovTreeMap& f,
                                        const std::vector<TreePoint>& samples,
                                        const mpq_class& eps, const std::vector<int>& p_list,
                                        int budget = 256);

}  // namespace lamdyn
