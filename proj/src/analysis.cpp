#include "lamdyn/analysis.hpp"

#include "lamdyn/circle.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace lamdyn {

const char* limit_type_name(LimitType t) {
    switch (t) {
        case LimitType::arc: return "arc";
        case LimitType::non_separating: return "non-separating";
        case LimitType::landing: return "landing";
    }
    return "?";
}

namespace {

bool class_exact(const AngleClass& c) { return c.exact(); }

// forward orbit of an exact class until the first key repeat; returns the
// class sequence and the index where the cycle starts
std::pair<std::vector<AngleClass>, int> exact_orbit(const Lamination& L, const AngleClass& seed) {
    std::vector<AngleClass> orbit;
    std::map<std::vector<Rational>, int> seen;
    AngleClass cur = seed;
    int stored = L.find(cur);
    for (;;) {
        auto it = seen.find(cur.key());
        if (it != seen.end()) return {orbit, it->second};
        seen.emplace(cur.key(), (int)orbit.size());
        orbit.push_back(cur);
        if (stored != -1) {
            int img = L.info(stored).image_id;
            if (img == -1)
                throw Frontier("orbit of " + seed.str() + " leaves the stored classes after " +
                               std::to_string(orbit.size()) + " steps");
            stored = img;
            cur = L.info(stored).cls;
        } else {
            cur = class_image(cur, L.degree());
        }
    }
}

std::vector<LimitPointRecord> omega_exact(const Lamination& L, const AngleClass& seed) {
    auto [orbit, rho] = exact_orbit(L, seed);
    const int pi = (int)orbit.size() - rho;
    std::vector<LimitPointRecord> out;
    for (int k = 0; k < pi; ++k) {
        LimitPointRecord rec;
        rec.target = orbit[(std::size_t)(rho + k)];
        rec.exact = true;
        rec.seed_preperiod = rho;
        for (int n = rho + k; n < rho + k + 3 * pi; n += pi) {
            rec.witnesses.push_back(n);
            rec.witness_classes.push_back(rec.target);
        }
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const LimitPointRecord& a, const LimitPointRecord& b) {
                  return a.target.key() < b.target.key();
              });
    return out;
}

std::vector<LimitPointRecord> omega_stream(const Lamination& L, const AngleClass& seed,
                                           int budget, int precision) {
    std::vector<AngleClass> orbit;
    orbit.reserve((std::size_t)budget + 1);
    std::vector<Rational> vals;
    AngleClass cur = seed;
    for (int n = 0; n <= budget; ++n) {
        vals.push_back(cur.at(0).window(precision, L.degree()));
        orbit.push_back(cur);
        if (n < budget) cur = cur.image(L.degree(), precision);
    }

    // bucket iterates into windows of width degree^-precision, merging
    // neighboring occupied cells so a target straddling a cell edge stays whole
    const Rational one(1, 1);
    std::map<Rational, std::vector<int>> cells;
    for (int n = 0; n <= budget; ++n) cells[vals[(std::size_t)n]].push_back(n);
    std::int64_t den = 1;
    for (int i = 0; i < precision; ++i) {
        if (den > ((std::int64_t)1 << 61) / L.degree())
            throw std::invalid_argument("precision too large for clustering");
        den *= L.degree();
    }
    const Rational cellw(1, den);
    std::vector<std::vector<int>> clusters;
    Rational last(-1, 1);
    for (auto& [v, ns] : cells) {
        if (!clusters.empty() && v - last <= cellw) {
            auto& back = clusters.back();
            back.insert(back.end(), ns.begin(), ns.end());
        } else {
            clusters.push_back(ns);
        }
        last = v;
    }
    // wraparound: first and last cell may describe the same target
    if (clusters.size() > 1) {
        Rational lo = cells.begin()->first;
        Rational hi = cells.rbegin()->first;
        if (one - hi + lo <= cellw) {
            auto& front = clusters.front();
            front.insert(front.end(), clusters.back().begin(), clusters.back().end());
            clusters.pop_back();
        }
    }

    std::vector<LimitPointRecord> out;
    for (auto& ns : clusters) {
        std::sort(ns.begin(), ns.end());
        if (ns.back() < budget / 2) continue;  // transient, never revisited late
        LimitPointRecord rec;
        rec.target = orbit[(std::size_t)ns.back()];
        rec.exact = false;
        for (int n : ns) {
            if (n == ns.back()) continue;
            rec.witnesses.push_back(n);
            rec.witness_classes.push_back(orbit[(std::size_t)n]);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

std::vector<LimitPointRecord> omega_limit(const Lamination& L, const AngleClass& seed,
                                          int budget, int precision) {
    if (budget < 1) throw std::invalid_argument("iterate budget must be positive");
    if (class_exact(seed)) return omega_exact(L, seed);
    if (precision < 1) throw std::invalid_argument("stream seeds need a positive precision");
    return omega_stream(L, seed, budget, precision);
}

LimitVerdict classify_limit_point(LimitPointRecord& rec, int precision) {
    if (rec.witnesses.size() < 3)
        throw InsufficientWitnesses("only " + std::to_string(rec.witnesses.size()) +
                                    " witnesses for target " + rec.target.str());
    if (rec.exact) {
        if (rec.seed_preperiod > 0) return {LimitType::landing, false};
        return {LimitType::arc, false};
    }

    // usable witnesses sit at positive distance from the target; stream
    // comparisons can come back undecided at the working precision, and such
    // witnesses drop out rather than force a verdict
    std::vector<const AngleClass*> ws;
    for (const auto& w : rec.witness_classes) {
        try {
            if (class_distance(w, rec.target, precision) > Rational(0, 1)) ws.push_back(&w);
        } catch (const UndecidedAtPrecision&) {
        }
    }
    if (ws.size() < 3)
        throw InsufficientWitnesses("only " + std::to_string(ws.size()) +
                                    " usable witnesses for target " + rec.target.str());
    if (ws.size() > 8) ws.erase(ws.begin(), ws.end() - 8);

    const AngleClass& t = rec.target;
    std::vector<Angle> side;
    Angle t_angle = t.at(0);
    if (t.size() >= 2) {
        // one-sided approach happens through a single hole of the target
        std::optional<std::size_t> h0;
        std::vector<const AngleClass*> kept;
        for (const auto* w : ws) {
            std::optional<std::size_t> h;
            try {
                h = t.hole_of(w->at(0), precision);
            } catch (const UndecidedAtPrecision&) {
                continue;
            }
            if (!h) continue;
            if (h0 && *h != *h0) return {LimitType::non_separating, true};
            h0 = h;
            kept.push_back(w);
        }
        if (kept.size() < 3)
            throw InsufficientWitnesses("only " + std::to_string(kept.size()) +
                                        " usable witnesses for target " + rec.target.str());
        ws = std::move(kept);
        const Angle& u = t.at(*h0);
        const Angle& v = t.at((*h0 + 1) % t.size());
        bool sided = false;
        for (auto it = ws.rbegin(); it != ws.rend() && !sided; ++it) {
            try {
                const Angle& wl = (*it)->at(0);
                t_angle = angle_distance(wl, u, precision) <= angle_distance(wl, v, precision)
                              ? u : v;
                sided = true;
            } catch (const UndecidedAtPrecision&) {
            }
        }
        if (!sided)
            throw UndecidedAtPrecision("approach side within hole of " + rec.target.str());
        side = {u, v};
    } else {
        side = {t_angle};
    }

    // each next witness must cut the previous one away from the target; bud
    // witnesses cannot cut, so for them a fixed-orientation approach stands
    // in; pairs the precision cannot resolve are skipped without advancing
    bool have_orient = false, orient = false;
    const AngleClass* a = ws[0];
    std::size_t chained = 1;
    for (std::size_t i = 1; i < ws.size(); ++i) {
        const AngleClass& b = *ws[i];
        try {
            if (b.size() >= 2) {
                auto ha = b.hole_of(a->at(0), precision);
                auto ht = b.hole_of(t_angle, precision);
                if (!ha || !ht || *ha == *ht) return {LimitType::non_separating, true};
            } else {
                bool o = circular_order(a->at(0), b.at(0), t_angle, precision);
                if (have_orient && o != orient) return {LimitType::non_separating, true};
                have_orient = true;
                orient = o;
            }
        } catch (const UndecidedAtPrecision&) {
            continue;
        }
        a = &b;
        ++chained;
    }
    if (chained < 3)
        throw InsufficientWitnesses("only " + std::to_string(chained) + " of " +
                                    std::to_string(ws.size()) +
                                    " witnesses chain toward target " + rec.target.str());
    rec.side_edge = std::move(side);
    return {LimitType::arc, true};
}

PeriodicCutpointScan periodic_cutpoints(const Lamination& L, int max_period) {
    PeriodicCutpointScan scan;
    if (max_period < 1) return scan;
    for (int id = 0; id < (int)L.size(); ++id) {
        const auto& ci = L.info(id);
        if (ci.cls.size() >= 2 && ci.preperiod == 0 && ci.period >= 1 && ci.period <= max_period)
            scan.cutpoints.push_back(id);
    }

    const int d = L.degree();
    std::set<std::vector<Rational>> cycles;
    for (int q = 1; q <= max_period; ++q) {
        std::int64_t m = 1;
        for (int i = 0; i < q; ++i) {
            if (m > ((std::int64_t)1 << 62) / d)
                throw LaminationError("period bound " + std::to_string(max_period) +
                                      " too large to enumerate");
            m *= d;
        }
        m -= 1;
        if (m < 1) continue;
        for (std::int64_t a = 0; a < m; ++a) {
            Rational r(a, m);
            std::vector<Rational> cyc{r};
            Rational cur = r;
            for (;;) {
                cur = (cur * Rational(d, 1)).mod1();
                if (cur == r) break;
                cyc.push_back(cur);
            }
            std::sort(cyc.begin(), cyc.end());
            if (!cycles.insert(cyc).second) continue;
            bool fully_stored = true;
            for (const auto& x : cyc)
                if (L.class_of_angle(x) == -1) fully_stored = false;
            if (!fully_stored) scan.candidates.push_back(cyc);
        }
    }
    std::sort(scan.candidates.begin(), scan.candidates.end());
    return scan;
}

Rational class_distance(const AngleClass& a, const AngleClass& b, int precision) {
    Rational best(1, 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            Rational d = angle_distance(a.at(i), b.at(j), precision);
            if (d < best) best = d;
        }
    return best;
}

bool is_persistent_cutpoint_bounded(const AngleClass& c, int degree, int horizon,
                                    int precision) {
    if (c.exact()) return is_persistent_cutpoint(c, degree);
    AngleClass cur = c;
    for (int k = 0; k <= horizon; ++k) {
        if (cur.size() < 2) return false;
        cur = cur.image(degree, precision);
    }
    return true;
}

namespace {

// nearest distance from an angle value to a sorted pool of exact angles
Rational nearest_in_pool(const Rational& v, const std::vector<Rational>& pool) {
    if (pool.empty()) return Rational(1, 1);
    auto it = std::lower_bound(pool.begin(), pool.end(), v);
    Rational best(1, 1);
    auto consider = [&](const Rational& a) {
        Rational d = v < a ? a - v : v - a;
        Rational w = Rational(1, 1) - d;
        if (w < d) d = w;
        if (d < best) best = d;
    };
    if (it != pool.end()) consider(*it);
    if (it != pool.begin()) consider(*std::prev(it));
    consider(pool.front());
    consider(pool.back());
    return best;
}

}  // namespace

VerificationReport verify_recurrence_theorems(const Lamination& L,
                                              const std::vector<AngleClass>& seeds,
                                              const std::vector<int>& p_list, int budget,
                                              int precision) {
    VerificationReport rep;
    rep.theorem = "periodic-cutpoint-closure";
    rep.depth = L.depth();
    rep.budget = budget;
    rep.precision = precision;
    rep.p_list = p_list;

    for (const auto& seed : seeds) {
        if (seed.exact()) {
            if (!is_persistent_cutpoint(seed, L.degree())) {
                AngleClass cur = seed;
                std::set<std::vector<Rational>> seen;
                while (cur.size() >= 2 && seen.insert(cur.key()).second)
                    cur = class_image(cur, L.degree());
                throw LaminationError("seed " + seed.str() +
                                      " is not a persistent cutpoint: image " + cur.str() +
                                      " is an endpoint class");
            }
        } else if (!is_persistent_cutpoint_bounded(seed, L.degree(), budget, precision)) {
            throw LaminationError("seed " + seed.str() +
                                  " collapses to an endpoint class within the budget");
        }
    }

    // angle pools per period bound: stored cutpoint classes plus candidate
    // cycles; pools grow with p, so per-target distances weakly decrease
    std::vector<std::vector<Rational>> pools;
    for (int p : p_list) {
        PeriodicCutpointScan scan = periodic_cutpoints(L, p);
        std::vector<Rational> pool;
        for (int id : scan.cutpoints) {
            const auto& c = L.info(id).cls;
            for (std::size_t i = 0; i < c.size(); ++i) pool.push_back(c.at(i).value());
        }
        for (const auto& cyc : scan.candidates)
            pool.insert(pool.end(), cyc.begin(), cyc.end());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        pools.push_back(std::move(pool));
    }

    bool ok = true;
    for (const auto& seed : seeds) {
        auto records = omega_limit(L, seed, budget, precision);
        if (records.empty()) {
            rep.notes.push_back("seed " + seed.str() + ": no limit targets at budget");
            continue;
        }
        for (const auto& rec : records) {
            SeedDistanceRow row;
            row.seed = seed.str();
            row.target = rec.target.str();
            row.eventually_periodic = rec.exact;
            std::vector<Rational> tvals;
            for (std::size_t i = 0; i < rec.target.size(); ++i)
                tvals.push_back(rec.target.at(i).window(precision, L.degree()));
            for (const auto& pool : pools) {
                Rational best(1, 1);
                for (const auto& tv : tvals) {
                    Rational d = nearest_in_pool(tv, pool);
                    if (d < best) best = d;
                }
                row.distances.push_back(best);
            }
            if (row.eventually_periodic) {
                for (const auto& d : row.distances)
                    if (!(d == Rational(0, 1))) ok = false;
            } else {
                for (std::size_t i = 0; i + 1 < row.distances.size(); ++i)
                    if (row.distances[i] < row.distances[i + 1]) ok = false;
            }
            rep.rows.push_back(std::move(row));
        }
    }
    rep.passed = ok;
    return rep;
}

std::string VerificationReport::str() const {
    std::ostringstream os;
    os << "report: " << theorem << "\n";
    os << "depth=" << depth << " budget=" << budget << " precision=" << precision
       << " periods=";
    for (std::size_t i = 0; i < p_list.size(); ++i) os << (i ? "," : "") << p_list[i];
    os << "\n";
    for (const auto& row : rows) {
        os << "seed " << row.seed << " target " << row.target << " kind="
           << (row.eventually_periodic ? "eventually-periodic" : "at-budget") << " distances=";
        for (const auto& d : row.distances) os << " " << d.str();
        os << "\n";
    }
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::vector<int> stored_image_map(const DendriteApprox& D) {
    std::vector<int> m(D.vertex_count());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = D.image_of((int)i);
    return m;
}

namespace {

std::set<int> validate_subtree(const DendriteApprox& D, const std::vector<int>& d1) {
    std::set<int> s(d1.begin(), d1.end());
    if (s.empty()) throw std::invalid_argument("empty vertex set");
    for (int v : s)
        if (v < 0 || v >= (int)D.vertex_count())
            throw std::invalid_argument("vertex id out of range");
    std::queue<int> bfs;
    std::set<int> seen;
    bfs.push(*s.begin());
    seen.insert(*s.begin());
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int w : D.adjacency()[(std::size_t)v])
            if (s.count(w) && seen.insert(w).second) bfs.push(w);
    }
    if (seen.size() != s.size())
        throw LaminationError("vertex set does not induce a subtree");
    return s;
}

// does the component of `from` in the tree minus `removed` meet `targets`?
bool component_meets(const DendriteApprox& D, int removed, int from,
                     const std::set<int>& targets) {
    if (targets.count(from)) return true;
    std::vector<char> seen(D.vertex_count(), 0);
    seen[(std::size_t)removed] = 1;
    seen[(std::size_t)from] = 1;
    std::queue<int> bfs;
    bfs.push(from);
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int w : D.adjacency()[(std::size_t)v]) {
            if (seen[(std::size_t)w]) continue;
            if (targets.count(w)) return true;
            seen[(std::size_t)w] = 1;
            bfs.push(w);
        }
    }
    return false;
}

}  // namespace

ScramblingResult boundary_scrambling_check(const DendriteApprox& D, const std::vector<int>& d1,
                                           const std::vector<int>& image_map) {
    std::set<int> s = validate_subtree(D, d1);
    ScramblingResult res;
    for (int e : s) {
        bool attachment = false;
        for (int w : D.adjacency()[(std::size_t)e])
            if (!s.count(w)) attachment = true;
        if (!attachment) continue;
        int fe = image_map[(std::size_t)e];
        if (fe == -1)
            throw Frontier("image of attachment vertex " + D.lamination().info(e).cls.str() +
                           " is not stored");
        if (fe == e) continue;
        std::set<int> targets = s;
        targets.erase(e);
        if (!component_meets(D, e, fe, targets)) res.violations.push_back(e);
    }
    res.ok = res.violations.empty();
    return res;
}

FixedPointResult fixed_cutpoint_search(const DendriteApprox& D, const std::vector<int>& d1,
                                       const std::vector<int>& image_map) {
    ScramblingResult scr = boundary_scrambling_check(D, d1, image_map);
    if (!scr.ok)
        throw LaminationError("boundary scrambling fails at vertex " +
                              D.lamination().info(scr.violations.front()).cls.str());
    std::set<int> s(d1.begin(), d1.end());
    const auto& lam = D.lamination();

    int fallback = -1;
    for (int v : s) {
        if (image_map[(std::size_t)v] != v) continue;
        if (lam.info(v).cls.size() >= 2) {
            FixedPointResult r;
            r.vertex = v;
            r.cutpoint = true;
            return r;
        }
        if (fallback == -1) fallback = v;
    }
    if (fallback != -1) {
        FixedPointResult r;
        r.vertex = fallback;
        r.note = "no-cutpoint-available";
        return r;
    }

    bool skipped = false;
    for (int a : s)
        for (int b : D.adjacency()[(std::size_t)a]) {
            if (b < a || !s.count(b)) continue;
            int fa = image_map[(std::size_t)a], fb = image_map[(std::size_t)b];
            if (fa == -1 || fb == -1) {
                skipped = true;
                continue;
            }
            // both ends mapped across themselves away from the edge brackets
            // a fixed point strictly inside
            if (D.separates(a, fa, b) && D.separates(b, fb, a)) {
                FixedPointResult r;
                r.edge = {a, b};
                r.note = "FIXED-POINT-BELOW-DEPTH";
                return r;
            }
        }
    throw Frontier(std::string("NO-FIXED-POINT-FOUND: no stored vertex is fixed and no edge "
                               "brackets a fixed point at this depth") +
                   (skipped ? " (some images are missing at depth)" : "") +
                   "; the guaranteed fixed point lies below the stored depth");
}

CoreResult dynamical_core(const DendriteApprox& D) {
    const auto& lam = D.lamination();
    const int d = lam.degree();
    CoreResult res;

    std::vector<int> criticals;
    for (int id = 0; id < (int)lam.size(); ++id)
        if (lam.info(id).cls.is_critical(d)) criticals.push_back(id);
    if (criticals.empty()) {
        res.no_critical_core = true;
        return res;
    }

    // seed with the periodic cycles the critical orbits fall onto
    std::set<int> X;
    for (int c : criticals) {
        std::vector<int> chain;
        std::set<int> on_chain;
        int v = c;
        while (v != -1 && on_chain.insert(v).second) {
            chain.push_back(v);
            v = D.image_of(v);
        }
        if (v == -1) {
            res.notes.push_back("critical orbit of " + lam.info(c).cls.str() +
                                " exits the stored depth");
            continue;
        }
        auto start = std::find(chain.begin(), chain.end(), v);
        X.insert(start, chain.end());
    }

    // closure under images and tree arcs until stable
    std::set<int> missing;
    for (;;) {
        std::size_t before = X.size();
        std::set<int> grown = X;
        for (int v : X) {
            int iv = D.image_of(v);
            if (iv == -1)
                missing.insert(v);
            else
                grown.insert(iv);
        }
        if (!grown.empty()) {
            int v0 = *grown.begin();
            std::set<int> hull = grown;
            for (int v : grown)
                for (int w : D.arc_between(v0, v)) hull.insert(w);
            grown = std::move(hull);
        }
        X = std::move(grown);
        if (X.size() == before) break;
    }
    for (int v : missing)
        res.notes.push_back("image of " + lam.info(v).cls.str() +
                            " missing at depth; invariance unverifiable there");

    res.vertices.assign(X.begin(), X.end());
    res.no_critical_core = res.vertices.empty();
    return res;
}

std::vector<int> absorption_failures(const DendriteApprox& D, const std::vector<int>& core) {
    std::set<int> in_core(core.begin(), core.end());
    std::vector<int> failures;
    for (int v = 0; v < (int)D.vertex_count(); ++v) {
        if (D.lamination().info(v).cls.size() < 2) continue;
        std::set<int> seen;
        int cur = v;
        bool absorbed = false;
        while (cur != -1 && seen.insert(cur).second) {
            if (in_core.count(cur)) {
                absorbed = true;
                break;
            }
            cur = D.image_of(cur);
        }
        if (!absorbed) failures.push_back(v);
    }
    return failures;
}

}  // namespace lamdyn
