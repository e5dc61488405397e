#include "lamdyn/markov.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

namespace lamdyn {

namespace {

// fractions built with the (num, den) constructor are not reduced, and gmp
// comparisons assume reduced form; funnel every external rational through here
mpq_class canon(mpq_class x) {
    x.canonicalize();
    return x;
}

// n = 2^a * q with q odd
std::pair<int, long> two_odd(long n) {
    int a = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++a;
    }
    return {a, n};
}

}  // namespace

bool sharkovskiy_less(const SharkType& m, const SharkType& n) {
    if (m.two_inf && n.two_inf) return false;
    if (m.two_inf) return two_odd(n.period).second == 1;
    if (n.two_inf) return two_odd(m.period).second > 1;
    if (m.period == n.period) return false;
    auto [a, p] = two_odd(m.period);
    auto [b, q] = two_odd(n.period);
    if (p > 1 && q > 1) return a == b ? p < q : a < b;
    if (p > 1) return true;
    if (q > 1) return false;
    return a > b;
}

bool sh_set_contains(const SharkType& k, long n) {
    if (n < 1) throw std::invalid_argument("period must be positive");
    if (k.two_inf) return two_odd(n).second == 1;
    return n == k.period || sharkovskiy_less(k, SharkType::finite(n));
}

MarkovTreeMap::MarkovTreeMap(int vertices, std::vector<Edge> edges,
                             std::vector<int> vertex_image,
                             std::vector<std::vector<Piece>> pieces)
    : vertices_(vertices),
      edges_(std::move(edges)),
      vertex_image_(std::move(vertex_image)),
      pieces_(std::move(pieces)) {
    if (vertices_ < 2) throw std::invalid_argument("a tree map needs at least one edge");
    if ((int)edges_.size() != vertices_ - 1)
        throw TreeMapError("edge count must be vertex count minus one");
    adj_.assign((std::size_t)vertices_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        Edge& e = edges_[i];
        e.len = canon(e.len);
        if (e.u < 0 || e.u >= vertices_ || e.v < 0 || e.v >= vertices_ || e.u == e.v)
            throw std::invalid_argument("edge endpoints out of range");
        if (e.len <= 0) throw std::invalid_argument("edge lengths must be positive");
        adj_[(std::size_t)e.u].push_back({(int)i, true});
        adj_[(std::size_t)e.v].push_back({(int)i, false});
    }
    std::vector<char> seen((std::size_t)vertices_, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (auto [ei, at_u] : adj_[(std::size_t)v]) {
            int w = at_u ? edges_[(std::size_t)ei].v : edges_[(std::size_t)ei].u;
            if (!seen[(std::size_t)w]) {
                seen[(std::size_t)w] = 1;
                ++reached;
                bfs.push(w);
            }
        }
    }
    if (reached != vertices_) throw TreeMapError("edges do not connect the vertex set");

    if ((int)vertex_image_.size() != vertices_)
        throw std::invalid_argument("vertex image size mismatch");
    for (int w : vertex_image_)
        if (w < 0 || w >= vertices_) throw std::invalid_argument("vertex image out of range");

    if (pieces_.size() != edges_.size()) throw std::invalid_argument("piece list size mismatch");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& ps = pieces_[i];
        if (ps.empty()) throw TreeMapError("every edge needs at least one piece");
        for (std::size_t j = 0; j < ps.size(); ++j) {
            ps[j].a = canon(ps[j].a);
            ps[j].b = canon(ps[j].b);
            if (ps[j].a >= ps[j].b) throw TreeMapError("pieces must have positive width");
            if (j + 1 < ps.size() && ps[j].b != ps[j + 1].a)
                throw TreeMapError("pieces must tile the edge without gaps");
            ps[j].from = normalize(ps[j].from);
            ps[j].to = normalize(ps[j].to);
        }
        if (ps.front().a != 0 || ps.back().b != edges_[i].len)
            throw TreeMapError("pieces must cover the whole edge");
        TreePoint iu = vertex_point(vertex_image_[(std::size_t)edges_[i].u]);
        TreePoint iv = vertex_point(vertex_image_[(std::size_t)edges_[i].v]);
        if (tree_point_compare(*this, ps.front().from, iu) != 0)
            throw TreeMapError("edge start does not match the image of its vertex");
        if (tree_point_compare(*this, ps.back().to, iv) != 0)
            throw TreeMapError("edge end does not match the image of its vertex");
        for (std::size_t j = 0; j + 1 < ps.size(); ++j)
            if (tree_point_compare(*this, ps[j].to, ps[j + 1].from) != 0)
                throw TreeMapError("discontinuity between adjacent pieces");
    }
}

TreePoint MarkovTreeMap::vertex_point(int v) const {
    if (v < 0 || v >= vertices_) throw std::invalid_argument("vertex out of range");
    auto [ei, at_u] = adj_[(std::size_t)v].front();
    TreePoint p;
    p.edge = ei;
    p.t = at_u ? mpq_class(0) : edges_[(std::size_t)ei].len;
    return p;
}

bool MarkovTreeMap::is_vertex(const TreePoint& p, int* v) const {
    if (p.t == 0) {
        if (v) *v = edges_[(std::size_t)p.edge].u;
        return true;
    }
    if (p.t == edges_[(std::size_t)p.edge].len) {
        if (v) *v = edges_[(std::size_t)p.edge].v;
        return true;
    }
    return false;
}

TreePoint MarkovTreeMap::normalize(const TreePoint& p) const {
    if (p.edge < 0 || p.edge >= (int)edges_.size())
        throw std::invalid_argument("edge out of range");
    TreePoint q = p;
    q.t.canonicalize();
    if (q.t < 0 || q.t > edges_[(std::size_t)q.edge].len)
        throw std::invalid_argument("offset outside the edge");
    int v;
    if (is_vertex(q, &v)) return vertex_point(v);
    return q;
}

int tree_point_compare(const MarkovTreeMap& f, const TreePoint& xo, const TreePoint& yo) {
    TreePoint x = f.normalize(xo), y = f.normalize(yo);
    int vx = -1, vy = -1;
    bool xv = f.is_vertex(x, &vx), yv = f.is_vertex(y, &vy);
    if (xv != yv) return xv ? -1 : 1;
    if (xv) return vx < vy ? -1 : vx > vy ? 1 : 0;
    if (x.edge != y.edge) return x.edge < y.edge ? -1 : 1;
    return cmp(x.t, y.t) < 0 ? -1 : cmp(x.t, y.t) > 0 ? 1 : 0;
}

MarkovTreeMap::Path MarkovTreeMap::path_between(const TreePoint& xo, const TreePoint& yo) const {
    TreePoint x = normalize(xo), y = normalize(yo);
    Path out;
    if (tree_point_compare(*this, x, y) == 0) return out;

    int vx = -1, vy = -1;
    bool xv = is_vertex(x, &vx), yv = is_vertex(y, &vy);
    if (!xv && !yv && x.edge == y.edge) {
        out.segs.push_back({x.edge, x.t, y.t});
        out.length = abs(y.t - x.t);
        return out;
    }

    struct End {
        int vertex;
        bool stub = false;
        Path::Seg seg{0, 0, 0};
        mpq_class extra = 0;
    };
    auto ends = [&](const TreePoint& p, bool pv, int vp, bool into) {
        std::vector<End> es;
        if (pv) {
            es.push_back({vp});
            return es;
        }
        const Edge& e = edges_[(std::size_t)p.edge];
        End a{e.u, true, {p.edge, p.t, 0}, p.t};
        End b{e.v, true, {p.edge, p.t, e.len}, e.len - p.t};
        if (into) {
            a.seg = {p.edge, 0, p.t};
            b.seg = {p.edge, e.len, p.t};
        }
        es.push_back(a);
        es.push_back(b);
        return es;
    };
    auto xs = ends(x, xv, vx, false);
    auto ys = ends(y, yv, vy, true);

    // vertex-level parents from a single sweep rooted at the x side
    std::vector<int> par_edge((std::size_t)vertices_, -1), par_vert((std::size_t)vertices_, -1);
    std::vector<mpq_class> dist((std::size_t)vertices_);
    std::vector<char> seen((std::size_t)vertices_, 0);
    std::queue<int> bfs;
    for (const End& e : xs) {
        seen[(std::size_t)e.vertex] = 1;
        dist[(std::size_t)e.vertex] = e.extra;
        bfs.push(e.vertex);
    }
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (auto [ei, at_u] : adj_[(std::size_t)v]) {
            int w = at_u ? edges_[(std::size_t)ei].v : edges_[(std::size_t)ei].u;
            if (seen[(std::size_t)w]) continue;
            seen[(std::size_t)w] = 1;
            par_edge[(std::size_t)w] = ei;
            par_vert[(std::size_t)w] = v;
            dist[(std::size_t)w] = dist[(std::size_t)v] + edges_[(std::size_t)ei].len;
            bfs.push(w);
        }
    }

    const End* bx = nullptr;
    const End* by = nullptr;
    mpq_class best = -1;
    for (const End& ey : ys) {
        mpq_class total = dist[(std::size_t)ey.vertex] + ey.extra;
        if (best < 0 || total < best) {
            best = total;
            by = &ey;
        }
    }
    // walk parents back to whichever x end seeded this branch
    std::vector<Path::Seg> mid;
    int cur = by->vertex;
    while (par_edge[(std::size_t)cur] != -1) {
        int ei = par_edge[(std::size_t)cur];
        int prev = par_vert[(std::size_t)cur];
        const Edge& e = edges_[(std::size_t)ei];
        mid.push_back({ei, prev == e.u ? mpq_class(0) : e.len, prev == e.u ? e.len : mpq_class(0)});
        cur = prev;
    }
    std::reverse(mid.begin(), mid.end());
    for (const End& ex : xs)
        if (ex.vertex == cur) bx = &ex;

    if (bx->stub) out.segs.push_back(bx->seg);
    for (auto& s : mid) out.segs.push_back(s);
    if (by->stub) out.segs.push_back(by->seg);
    out.length = best;
    return out;
}

TreePoint MarkovTreeMap::point_at(const Path& path, const mpq_class& s) const {
    if (s < 0 || s > path.length) throw std::logic_error("arc length outside the path");
    mpq_class acc = 0;
    for (const auto& seg : path.segs) {
        mpq_class slen = abs(seg.t1 - seg.t0);
        if (s <= acc + slen) {
            mpq_class off = seg.t0 + (seg.t1 > seg.t0 ? s - acc : acc - s);
            return normalize({seg.edge, off});
        }
        acc += slen;
    }
    throw std::logic_error("empty path has no points");
}

TreePoint MarkovTreeMap::eval(const TreePoint& po) const {
    TreePoint p = normalize(po);
    const auto& ps = pieces_[(std::size_t)p.edge];
    const Piece* pc = nullptr;
    for (const auto& cand : ps)
        if (cand.a <= p.t && p.t <= cand.b) {
            pc = &cand;
            break;
        }
    if (tree_point_compare(*this, pc->from, pc->to) == 0) return pc->from;
    Path path = path_between(pc->from, pc->to);
    mpq_class s = (p.t - pc->a) * path.length / (pc->b - pc->a);
    return point_at(path, s);
}

namespace {

using Pieces = std::vector<std::vector<MarkovTreeMap::Piece>>;

constexpr std::size_t kPieceGuard = 5'000'000;

Pieces compose_with_map(const MarkovTreeMap& f, const Pieces& cur) {
    Pieces next(cur.size());
    std::size_t total = 0;
    for (std::size_t e = 0; e < cur.size(); ++e) {
        for (const auto& pc : cur[e]) {
            if (tree_point_compare(f, pc.from, pc.to) == 0) {
                next[e].push_back({pc.a, pc.b, f.eval(pc.from), f.eval(pc.from)});
                ++total;
                continue;
            }
            auto path = f.path_between(pc.from, pc.to);
            const mpq_class& L = path.length;
            std::set<mpq_class> cuts;
            mpq_class acc = 0;
            for (const auto& seg : path.segs) {
                mpq_class lo = std::min(seg.t0, seg.t1), hi = std::max(seg.t0, seg.t1);
                if (acc > 0) cuts.insert(acc);
                for (const auto& fp : f.pieces()[(std::size_t)seg.edge]) {
                    for (const mpq_class& brk : {fp.a, fp.b}) {
                        if (brk <= lo || brk >= hi) continue;
                        mpq_class s = acc + abs(brk - seg.t0);
                        cuts.insert(s);
                    }
                }
                acc += hi - lo;
            }
            std::vector<mpq_class> xs{pc.a};
            std::vector<TreePoint> pts{pc.from};
            for (const mpq_class& s : cuts) {
                xs.push_back(pc.a + s * (pc.b - pc.a) / L);
                pts.push_back(f.point_at(path, s));
            }
            xs.push_back(pc.b);
            pts.push_back(pc.to);
            for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
                next[e].push_back({xs[j], xs[j + 1], f.eval(pts[j]), f.eval(pts[j + 1])});
                ++total;
            }
        }
        if (total > kPieceGuard)
            throw TreeMapError("BOUND-EXCEEDED: iterate needs more than 5000000 pieces");
    }
    return next;
}

using PointKey = std::tuple<int, int, mpq_class>;

PointKey key_of(const MarkovTreeMap& f, const TreePoint& po) {
    TreePoint p = f.normalize(po);
    int v;
    if (f.is_vertex(p, &v)) return {0, v, 0};
    return {1, p.edge, p.t};
}

void solve_fixed(const MarkovTreeMap& f, const Pieces& cur, FixedSet& out) {
    std::set<PointKey> pt_seen;
    std::set<std::tuple<int, mpq_class, mpq_class>> seg_seen;
    auto add_point = [&](const TreePoint& p) {
        if (pt_seen.insert(key_of(f, p)).second) out.points.push_back(f.normalize(p));
    };
    // fixed vertices first: their image sweep may never revisit an incident
    // edge, so the per-edge solve below cannot see them
    for (int v = 0; v < f.vertex_count(); ++v) {
        auto [ei, at_u] = f.adjacency()[(std::size_t)v].front();
        const auto& ps = cur[(std::size_t)ei];
        const TreePoint& val = at_u ? ps.front().from : ps.back().to;
        if (tree_point_compare(f, val, f.vertex_point(v)) == 0) add_point(f.vertex_point(v));
    }
    // offset of a point on edge e, if it lies there
    auto offset_on = [&](const TreePoint& po, int e) -> std::optional<mpq_class> {
        TreePoint p = f.normalize(po);
        int v;
        if (f.is_vertex(p, &v)) {
            if (f.edges()[(std::size_t)e].u == v) return mpq_class(0);
            if (f.edges()[(std::size_t)e].v == v) return f.edges()[(std::size_t)e].len;
            return std::nullopt;
        }
        if (p.edge == e) return p.t;
        return std::nullopt;
    };

    for (std::size_t e = 0; e < cur.size(); ++e) {
        for (const auto& pc : cur[e]) {
            if (tree_point_compare(f, pc.from, pc.to) == 0) {
                auto off = offset_on(pc.from, (int)e);
                if (off && pc.a <= *off && *off <= pc.b) add_point({(int)e, *off});
                continue;
            }
            auto path = f.path_between(pc.from, pc.to);
            mpq_class v = path.length / (pc.b - pc.a);
            mpq_class acc = 0;
            for (const auto& seg : path.segs) {
                mpq_class slen = abs(seg.t1 - seg.t0);
                if (seg.edge == (int)e) {
                    int sgn = seg.t1 > seg.t0 ? 1 : -1;
                    // x = t0 + sgn*(v*(x - a) - acc) on the window covered by
                    // this sweep segment
                    mpq_class c = 1 - sgn * v;
                    mpq_class r = seg.t0 - sgn * v * pc.a - sgn * acc;
                    mpq_class wlo = pc.a + acc / v;
                    mpq_class whi = pc.a + (acc + slen) / v;
                    if (c != 0) {
                        mpq_class root = r / c;
                        if (wlo <= root && root <= whi) add_point({(int)e, root});
                    } else if (r == 0) {
                        // keep segment endpoints in the coordinates of their
                        // own edge; vertex canonicalization would detach them
                        if (seg_seen.insert({(int)e, wlo, whi}).second)
                            out.segments.push_back({{(int)e, wlo}, {(int)e, whi}});
                    }
                }
                acc += slen;
            }
        }
    }
}

}  // namespace

FixedSet fixed_points(const MarkovTreeMap& f, int p) {
    if (p < 1) throw std::invalid_argument("iterate must be positive");
    Pieces cur = f.pieces();
    for (int i = 2; i <= p; ++i) cur = compose_with_map(f, cur);
    FixedSet out;
    solve_fixed(f, cur, out);
    return out;
}

PeriodSet exact_periods(const MarkovTreeMap& f, int P) {
    if (P < 1) throw std::invalid_argument("period bound must be positive");
    if (P > 16)
        throw TreeMapError("BOUND-EXCEEDED: period bound " + std::to_string(P) +
                           " exceeds the supported 16");

    std::vector<FixedSet> fix((std::size_t)P + 1);
    std::vector<std::set<PointKey>> keys((std::size_t)P + 1);
    Pieces cur = f.pieces();
    for (int p = 1; p <= P; ++p) {
        if (p > 1) cur = compose_with_map(f, cur);
        solve_fixed(f, cur, fix[(std::size_t)p]);
        for (const auto& pt : fix[(std::size_t)p].points)
            keys[(std::size_t)p].insert(key_of(f, pt));
    }

    PeriodSet ps;
    for (int p = 1; p <= P; ++p) {
        bool realized = false;
        for (const auto& pt : fix[(std::size_t)p].points) {
            PointKey k = key_of(f, pt);
            bool lower = false;
            for (int d = 1; d < p && !lower; ++d)
                if (p % d == 0 && keys[(std::size_t)d].count(k)) lower = true;
            if (!lower) {
                realized = true;
                break;
            }
        }
        // a pointwise-fixed segment realizes p unless lower-iterate segments
        // already cover it
        for (std::size_t si = 0; !realized && si < fix[(std::size_t)p].segments.size(); ++si) {
            const auto& [A, B] = fix[(std::size_t)p].segments[si];
            std::vector<std::pair<mpq_class, mpq_class>> cover;
            for (int d = 1; d < p; ++d) {
                if (p % d != 0) continue;
                for (const auto& [C, D] : fix[(std::size_t)d].segments)
                    if (C.edge == A.edge) cover.push_back({C.t, D.t});
            }
            std::sort(cover.begin(), cover.end());
            mpq_class reach = A.t;
            for (const auto& [lo, hi] : cover) {
                if (lo > reach) break;
                if (hi > reach) reach = hi;
            }
            if (reach < B.t) realized = true;
        }
        if (realized) ps.realized.insert(p);
    }

    ps.down_set = true;
    for (long m : ps.realized)
        for (long n = 1; n <= P; ++n)
            if (sharkovskiy_less(SharkType::finite(m), SharkType::finite(n)) &&
                !ps.realized.count(n))
                ps.down_set = false;
    if (ps.down_set && !ps.realized.empty()) {
        long top = *ps.realized.begin();
        for (long m : ps.realized)
            if (sharkovskiy_less(SharkType::finite(m), SharkType::finite(top))) top = m;
        ps.classification = SharkType::finite(top);
    }
    return ps;
}

MarkovTreeMap interval_markov_map(const std::vector<mpq_class>& breakpoints_in,
                                  const std::vector<mpq_class>& values_in) {
    if (breakpoints_in.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    if (values_in.size() != breakpoints_in.size())
        throw std::invalid_argument("one value per breakpoint");
    std::vector<mpq_class> breakpoints, values;
    for (const auto& b : breakpoints_in) breakpoints.push_back(canon(b));
    for (const auto& v : values_in) values.push_back(canon(v));
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (breakpoints[i] >= breakpoints[i + 1])
            throw std::invalid_argument("breakpoints must increase strictly");

    int n = (int)breakpoints.size();
    std::vector<int> img((std::size_t)n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (values[(std::size_t)i] == breakpoints[(std::size_t)j]) img[(std::size_t)i] = j;
        if (img[(std::size_t)i] < 0)
            throw TreeMapError("value " + values[(std::size_t)i].get_str() +
                               " is not a breakpoint; the map is not Markov");
    }

    std::vector<MarkovTreeMap::Edge> edges;
    for (int i = 0; i + 1 < n; ++i)
        edges.push_back({i, i + 1, breakpoints[(std::size_t)i + 1] - breakpoints[(std::size_t)i]});
    std::vector<std::vector<MarkovTreeMap::Piece>> pieces((std::size_t)n - 1);

    // vertex_point is not available before construction; describe endpoints
    // by edge offsets directly
    auto at_vertex = [&](int v) -> TreePoint {
        if (v + 1 < n) return {v, 0};
        return {v - 1, edges[(std::size_t)v - 1].len};
    };
    for (int i = 0; i + 1 < n; ++i)
        pieces[(std::size_t)i].push_back(
            {0, edges[(std::size_t)i].len, at_vertex(img[(std::size_t)i]),
             at_vertex(img[(std::size_t)i + 1])});
    return MarkovTreeMap(n, std::move(edges), std::move(img), std::move(pieces));
}

MarkovTreeMap identity_interval_map() {
    return interval_markov_map({0, 1}, {0, 1});
}

MarkovTreeMap tent_map() {
    return interval_markov_map({0, mpq_class(1, 2), 1}, {0, 1, 0});
}

MarkovTreeMap truncated_tent(const mpq_class& h_in, int orbit_bound) {
    mpq_class h = canon(h_in);
    if (h <= 0 || h > 1) throw std::invalid_argument("truncation height must be in (0, 1]");
    if (h == 1) return tent_map();
    auto capped = [&](const mpq_class& x) {
        mpq_class t = 2 * x;
        if (x > mpq_class(1, 2)) t = 2 - 2 * x;
        return t < h ? t : h;
    };
    std::set<mpq_class> coords{0, mpq_class(1, 2), 1, h / 2, 1 - h / 2};
    mpq_class x = h;
    for (int i = 0; i <= orbit_bound; ++i) {
        if (coords.count(x) && i > 0) break;
        if (i == orbit_bound)
            throw TreeMapError("orbit of the truncation height exceeds the bound");
        coords.insert(x);
        x = capped(x);
    }
    std::vector<mpq_class> bs(coords.begin(), coords.end());
    std::vector<mpq_class> vs;
    for (const auto& c : bs) vs.push_back(capped(c));
    return interval_markov_map(bs, vs);
}

MarkovTreeMap stefan_map(int k) {
    if (k < 3 || k % 2 == 0) throw std::invalid_argument("the cycle length must be odd and >= 3");
    int m = (k + 1) / 2;
    std::vector<int> visit{m};
    for (int i = 1; i < k; ++i)
        visit.push_back(i % 2 == 1 ? m + (i + 1) / 2 : m - i / 2);
    std::vector<int> sigma((std::size_t)k + 1, 0);
    for (int j = 0; j < k; ++j)
        sigma[(std::size_t)visit[(std::size_t)j]] = visit[(std::size_t)((j + 1) % k)];

    std::vector<mpq_class> bs, vs;
    for (int i = 1; i <= k; ++i) {
        bs.push_back(i);
        vs.push_back(sigma[(std::size_t)i]);
    }
    return interval_markov_map(bs, vs);
}

MarkovTreeMap star_rotation(int legs) {
    if (legs < 3) throw std::invalid_argument("a star needs at least three legs");
    std::vector<MarkovTreeMap::Edge> edges;
    std::vector<int> img{0};
    for (int i = 1; i <= legs; ++i) {
        edges.push_back({0, i, 1});
        img.push_back(i % legs + 1);
    }
    std::vector<std::vector<MarkovTreeMap::Piece>> pieces((std::size_t)legs);
    for (int i = 1; i <= legs; ++i) {
        TreePoint center{0, 0};
        TreePoint tip{i % legs, 1};  // edge i%legs runs center -> tip i%legs+1
        pieces[(std::size_t)i - 1].push_back({0, 1, center, tip});
    }
    return MarkovTreeMap(legs + 1, std::move(edges), std::move(img), std::move(pieces));
}

MarkovTreeMap random_markov_map(std::mt19937& rng) {
    std::uniform_int_distribution<int> count(2, 4);
    std::uniform_int_distribution<int> pos(1, 11);
    for (;;) {
        std::set<int> interior;
        int m = count(rng);
        while ((int)interior.size() < m) interior.insert(pos(rng));
        std::vector<mpq_class> bs{0};
        for (int j : interior) bs.push_back(canon(mpq_class(j, 12)));
        bs.push_back(1);

        std::uniform_int_distribution<int> vi(0, (int)bs.size() - 1);
        std::vector<mpq_class> vs;
        bool ok = true;
        for (std::size_t i = 0; i < bs.size() && ok; ++i) {
            int tries = 0;
            for (;;) {
                mpq_class v = bs[(std::size_t)vi(rng)];
                mpq_class dv = 0, db = 1;
                if (i) {
                    dv = abs(v - vs.back());
                    db = bs[i] - bs[i - 1];
                }
                // reject flat and slope +-1 pieces so iterates stay transversal
                if (i == 0 || (dv != 0 && dv != db)) {
                    vs.push_back(v);
                    break;
                }
                if (++tries > 32) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return interval_markov_map(bs, vs);
    }
}

namespace {

// global coordinates when the tree is a path, for fast distance queries
std::optional<std::vector<mpq_class>> interval_coordinates(const MarkovTreeMap& f) {
    int n = f.vertex_count();
    int start = -1;
    for (int v = 0; v < n; ++v) {
        if (f.adjacency()[(std::size_t)v].size() > 2) return std::nullopt;
        if (f.adjacency()[(std::size_t)v].size() == 1 && start < 0) start = v;
    }
    std::vector<mpq_class> coord((std::size_t)n);
    std::vector<char> seen((std::size_t)n, 0);
    int cur = start;
    seen[(std::size_t)cur] = 1;
    coord[(std::size_t)cur] = 0;
    for (;;) {
        int nxt = -1, ei = -1;
        for (auto [e, at_u] : f.adjacency()[(std::size_t)cur]) {
            int w = at_u ? f.edges()[(std::size_t)e].v : f.edges()[(std::size_t)e].u;
            if (!seen[(std::size_t)w]) {
                nxt = w;
                ei = e;
            }
        }
        if (nxt < 0) break;
        coord[(std::size_t)nxt] = coord[(std::size_t)cur] + f.edges()[(std::size_t)ei].len;
        seen[(std::size_t)nxt] = 1;
        cur = nxt;
    }
    return coord;
}

mpq_class point_coord(const MarkovTreeMap& f, const std::vector<mpq_class>& coord,
                      const TreePoint& p) {
    const auto& e = f.edges()[(std::size_t)p.edge];
    const mpq_class& cu = coord[(std::size_t)e.u];
    const mpq_class& cv = coord[(std::size_t)e.v];
    return cu + (cv - cu) * p.t / e.len;
}

}  // namespace

CenterReport center_vs_periodic_closure(const MarkovTreeMap& f,
                                        const std::vector<TreePoint>& samples,
                                        const mpq_class& eps, const std::vector<int>& p_list,
                                        int budget) {
    if (p_list.empty()) throw std::invalid_argument("need at least one period bound");
    for (std::size_t i = 0; i + 1 < p_list.size(); ++i)
        if (p_list[i] >= p_list[i + 1])
            throw std::invalid_argument("period bounds must increase");
    if (budget < 8) throw std::invalid_argument("iterate budget too small");

    int maxP = p_list.back();
    if (maxP > 16)
        throw TreeMapError("BOUND-EXCEEDED: period bound " + std::to_string(maxP) +
                           " exceeds the supported 16");
    std::vector<FixedSet> fix((std::size_t)maxP + 1);
    Pieces cur = f.pieces();
    for (int p = 1; p <= maxP; ++p) {
        if (p > 1) cur = compose_with_map(f, cur);
        solve_fixed(f, cur, fix[(std::size_t)p]);
    }

    auto coords = interval_coordinates(f);
    int tail = std::min(budget / 4, 16);

    CenterReport rep;
    rep.p_list = p_list;
    rep.samples = (int)samples.size();
    rep.budget = budget;
    rep.eps = canon(eps);

    std::vector<std::vector<TreePoint>> tails;
    for (const auto& s : samples) {
        TreePoint x = f.normalize(s);
        std::vector<TreePoint> tl;
        for (int i = 0; i < budget; ++i) {
            x = f.eval(x);
            if (i >= budget - tail) tl.push_back(x);
        }
        tails.push_back(std::move(tl));
    }

    for (int P : p_list) {
        std::vector<TreePoint> pts;
        std::vector<std::pair<TreePoint, TreePoint>> segs;
        for (int p = 1; p <= P; ++p) {
            pts.insert(pts.end(), fix[(std::size_t)p].points.begin(),
                       fix[(std::size_t)p].points.end());
            segs.insert(segs.end(), fix[(std::size_t)p].segments.begin(),
                        fix[(std::size_t)p].segments.end());
        }
        std::vector<mpq_class> sorted;
        if (coords) {
            for (const auto& p : pts) sorted.push_back(point_coord(f, *coords, p));
            std::sort(sorted.begin(), sorted.end());
        }
        auto dist_to_set = [&](const TreePoint& q) {
            mpq_class best = -1;
            if (coords) {
                mpq_class qc = point_coord(f, *coords, q);
                auto it = std::lower_bound(sorted.begin(), sorted.end(), qc);
                if (it != sorted.end()) best = *it - qc;
                if (it != sorted.begin()) {
                    mpq_class d = qc - *(it - 1);
                    if (best < 0 || d < best) best = d;
                }
            } else {
                for (const auto& p : pts) {
                    mpq_class d = f.path_between(q, p).length;
                    if (best < 0 || d < best) best = d;
                }
            }
            for (const auto& [A, B] : segs) {
                if (q.edge == A.edge && A.t <= q.t && q.t <= B.t) return mpq_class(0);
                for (const TreePoint* end : {&A, &B}) {
                    mpq_class d = f.path_between(q, *end).length;
                    if (best < 0 || d < best) best = d;
                }
            }
            return best < 0 ? mpq_class(1) : best;
        };
        mpq_class worst = 0;
        for (const auto& tl : tails)
            for (const auto& q : tl) {
                mpq_class d = dist_to_set(q);
                if (d > worst) worst = d;
            }
        rep.max_distance.push_back(worst);
    }

    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < rep.max_distance.size(); ++i)
        if (rep.max_distance[i] < rep.max_distance[i + 1]) decreasing = false;
    rep.passed = rep.max_distance.back() <= rep.eps || decreasing;
    return rep;
}

std::string CenterReport::str() const {
    std::ostringstream os;
    os << "report: center-vs-periodic-closure\n";
    os << "samples=" << samples << " budget=" << budget << " eps=" << eps.get_str() << "\n";
    for (std::size_t i = 0; i < p_list.size(); ++i)
        os << "P=" << p_list[i] << " max-distance=" << max_distance[i].get_str() << "\n";
    os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace lamdyn
