#include "lamdyn/lamination.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace lamdyn {

// ---------------------------------------------------------------- AngleClass

AngleClass AngleClass::of_exact(std::vector<Angle> angles) {
    if (angles.empty()) throw std::invalid_argument("empty angle class");
    for (const auto& a : angles)
        if (!a.exact())
            throw std::invalid_argument("exact class cannot hold stream angles");
    std::sort(angles.begin(), angles.end(),
              [](const Angle& a, const Angle& b) { return a.value() < b.value(); });
    for (std::size_t i = 1; i < angles.size(); ++i)
        if (angles[i].value() == angles[i - 1].value())
            throw std::invalid_argument("duplicate angle in class: " + angles[i].str());
    AngleClass c;
    c.angles_ = std::move(angles);
    return c;
}

AngleClass AngleClass::of_rationals(std::initializer_list<Rational> rs) {
    std::vector<Angle> v;
    for (const auto& r : rs) v.push_back(Angle::from_rational(r));
    return of_exact(std::move(v));
}

AngleClass AngleClass::with_precision(std::vector<Angle> angles, int precision) {
    if (angles.empty()) throw std::invalid_argument("empty angle class");
    bool all_exact = true;
    for (const auto& a : angles) all_exact = all_exact && a.exact();
    if (all_exact) return of_exact(std::move(angles));
    std::sort(angles.begin(), angles.end(), [&](const Angle& a, const Angle& b) {
        return compare_angles(a, b, precision) == std::strong_ordering::less;
    });
    for (std::size_t i = 1; i < angles.size(); ++i)
        if (angle_eq(angles[i - 1], angles[i], precision))
            throw std::invalid_argument("duplicate angle in class: " + angles[i].str());
    AngleClass c;
    c.angles_ = std::move(angles);
    return c;
}

bool AngleClass::exact() const {
    for (const auto& a : angles_)
        if (!a.exact()) return false;
    return true;
}

AngleClass AngleClass::image(int degree, int precision) const {
    std::vector<Angle> im;
    im.reserve(angles_.size());
    for (const auto& a : angles_) im.push_back(a.sigma(degree));
    AngleClass c;
    bool all_exact = true;
    for (const auto& a : im) all_exact = all_exact && a.exact();
    if (all_exact) {
        std::vector<Rational> vals;
        for (const auto& a : im) vals.push_back(a.value());
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (const auto& v : vals) c.angles_.push_back(Angle::from_rational(v));
        return c;
    }
    std::sort(im.begin(), im.end(), [&](const Angle& a, const Angle& b) {
        return compare_angles(a, b, precision) == std::strong_ordering::less;
    });
    for (auto& a : im)
        if (c.angles_.empty() || !angle_eq(c.angles_.back(), a, precision))
            c.angles_.push_back(std::move(a));
    return c;
}

std::vector<OrientedArc> AngleClass::holes() const {
    std::vector<OrientedArc> hs;
    if (size() == 1) {
        hs.push_back(OrientedArc::full_minus(angles_[0]));
        return hs;
    }
    for (std::size_t i = 0; i < size(); ++i)
        hs.emplace_back(angles_[i], angles_[(i + 1) % size()]);
    return hs;
}

std::vector<Chord> AngleClass::hull_chords() const {
    std::vector<Chord> cs;
    if (size() < 2) return cs;
    if (size() == 2) {
        cs.emplace_back(angles_[0], angles_[1]);
        return cs;
    }
    for (std::size_t i = 0; i < size(); ++i)
        cs.emplace_back(angles_[i], angles_[(i + 1) % size()]);
    return cs;
}

std::optional<std::size_t> AngleClass::hole_of(const Angle& x, int precision) const {
    if (exact() && x.exact()) {
        const Rational& v = x.value();
        std::size_t lo = 0, hi = size();
        while (lo < hi) {  // first index with angle > v
            std::size_t mid = (lo + hi) / 2;
            if (angles_[mid].value() > v) hi = mid;
            else lo = mid + 1;
        }
        if (lo > 0 && angles_[lo - 1].value() == v) return std::nullopt;
        if (size() == 1) return 0;
        return (lo + size() - 1) % size();
    }
    for (const auto& a : angles_)
        if (angle_eq(a, x, precision)) return std::nullopt;
    std::size_t i = 0;
    for (const auto& h : holes()) {
        if (in_open_arc(x, h, precision)) return i;
        ++i;
    }
    throw UndecidedAtPrecision("hole membership for " + x.str());
}

bool AngleClass::unlinked(const AngleClass& u, const AngleClass& v, int precision) {
    std::optional<std::size_t> hole;
    for (const auto& a : v.angles()) {
        auto h = u.hole_of(a, precision);
        if (!h) continue;  // shared point, never a crossing
        if (!hole) hole = h;
        else if (*hole != *h) return false;
    }
    return true;
}

std::vector<Rational> AngleClass::key() const {
    std::vector<Rational> k;
    k.reserve(size());
    for (const auto& a : angles_) k.push_back(a.value());
    return k;
}

bool AngleClass::contains_exact(const Rational& r) const {
    for (const auto& a : angles_)
        if (a.exact() && a.value() == r) return true;
    return false;
}

std::string AngleClass::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < size(); ++i) {
        if (i) s += ", ";
        s += angles_[i].str();
    }
    return s + "}";
}

bool operator==(const AngleClass& a, const AngleClass& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Angle &x = a.at(i), &y = b.at(i);
        if (x.exact() && y.exact()) {
            if (!(x.value() == y.value())) return false;
        } else if (x.str() != y.str()) {
            return false;
        }
    }
    return true;
}

AngleClass class_image(const AngleClass& c, int degree, int precision) {
    return c.image(degree, precision);
}

bool is_critical(const AngleClass& c, int degree, int precision) {
    return c.is_critical(degree, precision);
}

ClassKind classify_class(const AngleClass& c) { return c.kind(); }

// ---------------------------------------------------------------- ChordIndex

static bool in_open_span(const Rational& t, const Rational& lo, const Rational& hi) {
    if (lo < hi) return lo < t && t < hi;
    return t > lo || t < hi;  // span wraps through 0
}

void ChordIndex::insert(const AngleClass& c) {
    for (const auto& ch : c.hull_chords()) {
        const Rational& a = ch.a.value();
        const Rational& b = ch.b.value();
        ends_[a].push_back(b);
        ends_[b].push_back(a);
    }
}

bool ChordIndex::crosses(const Rational& x, const Rational& y) const {
    // A stored edge crosses {x,y} iff exactly one of its endpoints lies
    // strictly inside the span (x,y); scan the endpoints inside the span and
    // look for a partner strictly on the other side.
    auto scan = [&](std::map<Rational, std::vector<Rational>>::const_iterator it,
                    std::map<Rational, std::vector<Rational>>::const_iterator end) {
        for (; it != end; ++it)
            for (const auto& p : it->second)
                if (in_open_span(p, y, x)) return true;
        return false;
    };
    if (x < y) return scan(ends_.upper_bound(x), ends_.lower_bound(y));
    if (scan(ends_.upper_bound(x), ends_.end())) return true;
    return scan(ends_.begin(), ends_.lower_bound(y));
}

bool ChordIndex::class_conflicts(const AngleClass& c) const {
    for (const auto& ch : c.hull_chords())
        if (crosses(ch.a.value(), ch.b.value())) return true;
    return false;
}

// ---------------------------------------------------------------- Lamination

const std::vector<int> Lamination::no_siblings_{};

int Lamination::find(const AngleClass& c) const { return find_key(c.key()); }

int Lamination::find_key(const std::vector<Rational>& key) const {
    auto it = by_key_.find(key);
    return it == by_key_.end() ? -1 : it->second;
}

const std::vector<int>& Lamination::siblings_of(int id) const {
    auto it = siblings_.find(id);
    return it == siblings_.end() ? no_siblings_ : it->second;
}

int Lamination::class_of_angle(const Rational& a) const {
    auto it = by_angle_.find(a);
    return it == by_angle_.end() ? -1 : it->second;
}

int Lamination::add_class(AngleClass c, int generation, bool generator) {
    if (!c.exact())
        throw std::invalid_argument("stored classes must carry exact angles");
    auto key = c.key();
    if (by_key_.count(key))
        throw LaminationError("class stored twice: " + c.str());
    for (const auto& r : key) {
        auto it = by_angle_.find(r);
        if (it != by_angle_.end())
            throw LaminationError("classes not disjoint: angle " + r.str() + " lies in " +
                                  classes_[(std::size_t)it->second].cls.str() + " and " +
                                  c.str());
    }
    int id = (int)classes_.size();
    for (const auto& r : key) by_angle_[r] = id;
    by_key_[std::move(key)] = id;
    index_.insert(c);
    ClassInfo info;
    info.cls = std::move(c);
    info.generation = generation;
    info.generator = generator;
    classes_.push_back(std::move(info));
    return id;
}

void Lamination::compute_orbit_data() {
    const std::size_t n = classes_.size();
    std::vector<int> state(n, 0);  // 0 new, 1 on current path, 2 finished
    for (std::size_t s = 0; s < n; ++s) {
        if (state[s]) continue;
        std::vector<int> path;
        int cur = (int)s;
        while (cur != -1 && state[(std::size_t)cur] == 0) {
            state[(std::size_t)cur] = 1;
            path.push_back(cur);
            cur = classes_[(std::size_t)cur].image_id;
        }
        if (cur == -1 || classes_[(std::size_t)cur].period == -1) {
            if (cur != -1 && state[(std::size_t)cur] == 1) {
                // fresh cycle found on this path
                std::size_t pos = 0;
                while (path[pos] != cur) ++pos;
                int len = (int)(path.size() - pos);
                for (std::size_t i = 0; i < path.size(); ++i) {
                    auto& ci = classes_[(std::size_t)path[i]];
                    ci.period = len;
                    ci.preperiod = i >= pos ? 0 : (int)(pos - i);
                }
            }
            // else: orbit leaves the stored family; leave -1 everywhere
        } else {
            const auto& hit = classes_[(std::size_t)cur];
            int pre = hit.preperiod, len = hit.period;
            for (std::size_t i = path.size(); i-- > 0;) {
                auto& ci = classes_[(std::size_t)path[i]];
                ci.period = len;
                ci.preperiod = ++pre;
            }
        }
        for (int id : path) state[(std::size_t)id] = 2;
    }
}

std::vector<int> Lamination::sorted_ids() const {
    std::vector<int> ids(classes_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = (int)i;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        return classes_[(std::size_t)a].cls.key() < classes_[(std::size_t)b].cls.key();
    });
    return ids;
}

// -------------------------------------------------------------- check_axioms

std::string AxiomReport::str() const {
    std::ostringstream os;
    if (passed()) os << "all axioms hold on the stored family\n";
    for (const auto& v : violations) os << v.axiom << " violated: " << v.witness << "\n";
    for (const auto& n : notes) os << "note: " << n << "\n";
    return os.str();
}

AxiomReport check_axioms(const Lamination& L) {
    AxiomReport rep;
    rep.notes.push_back(
        "closedness holds for any finite family; checked here as: every class finite and "
        "duplicate-free, classes pairwise disjoint");

    const auto ids = L.sorted_ids();

    // class-level sanity (distinct sorted angles); disjointness across classes
    std::map<Rational, int> owner;
    for (int id : ids) {
        const auto& c = L.info(id).cls;
        if (c.size() == 0) {
            rep.violations.push_back({"E3", "empty class stored"});
            continue;
        }
        for (std::size_t i = 1; i < c.size(); ++i)
            if (!(c.at(i - 1).value() < c.at(i).value()))
                rep.violations.push_back({"E3", "class " + c.str() + " repeats an angle"});
        for (const auto& a : c.angles()) {
            auto [it, fresh] = owner.emplace(a.value(), id);
            if (!fresh)
                rep.violations.push_back(
                    {"E3", "angle " + a.value().str() + " lies in two classes: " +
                               L.info(it->second).cls.str() + " and " + c.str()});
        }
    }
    rep.notes.push_back("total disconnectedness: finite classes only, so automatic");

    // pairwise unlinked, via the chord index (a class never conflicts with its
    // own hull edges, so querying the full index is safe)
    for (int id : ids) {
        const auto& c = L.info(id).cls;
        if (!L.chord_index().class_conflicts(c)) continue;
        // name a concrete partner for the report
        bool named = false;
        for (int other : ids) {
            if (other == id) continue;
            if (!AngleClass::unlinked(c, L.info(other).cls, 0)) {
                rep.violations.push_back(
                    {"E2", "classes " + c.str() + " and " + L.info(other).cls.str() +
                               " interleave on the circle"});
                named = true;
                break;
            }
        }
        if (!named)
            rep.violations.push_back({"E2", "class " + c.str() + " crosses a stored edge"});
    }

    // forward invariance: image of every class is again a stored class
    int frontier = 0;
    for (int id : ids) {
        const auto& info = L.info(id);
        AngleClass im = class_image(info.cls, L.degree());
        int j = L.find(im);
        if (j == -1) {
            // distinguish "not stored at all" from "collides with stored classes"
            int hit = -1;
            for (const auto& a : im.angles()) {
                int k = L.class_of_angle(a.value());
                if (k != -1) { hit = k; break; }
            }
            if (hit != -1)
                rep.violations.push_back(
                    {"D1", "image " + im.str() + " of " + info.cls.str() +
                               " overlaps stored class " + L.info(hit).cls.str() +
                               " without equalling it"});
            else {
                rep.violations.push_back(
                    {"D1", "image " + im.str() + " of " + info.cls.str() +
                               " is not a stored class (frontier)"});
                ++frontier;
            }
        }
    }
    if (frontier)
        rep.notes.push_back(std::to_string(frontier) +
                            " class(es) map outside the stored family (frontier)");

    // preimage splitting: no class has more than `degree` stored siblings
    std::map<std::vector<Rational>, std::vector<int>> pre;
    for (int id : ids)
        pre[class_image(L.info(id).cls, L.degree()).key()].push_back(id);
    for (const auto& [k, sibs] : pre) {
        if ((int)sibs.size() <= L.degree()) continue;
        int fid = L.find_key(k);
        std::string target = fid == -1 ? "a frontier class" : L.info(fid).cls.str();
        rep.violations.push_back({"D2", "preimage of " + target + " holds " +
                                            std::to_string(sibs.size()) +
                                            " classes, degree is " +
                                            std::to_string(L.degree())});
    }

    // hole orientation: consecutive angles stay consecutive under the map
    for (int id : ids) {
        const auto& c = L.info(id).cls;
        if (c.size() < 2) continue;
        AngleClass im = class_image(c, L.degree());
        if (L.find(im) == -1) continue;  // already reported under D1
        if (im.size() < 2) continue;     // all holes of c land on the point's hole
        const std::size_t m = im.size();
        for (std::size_t i = 0; i < c.size(); ++i) {
            Rational sa = (c.at(i).value() * Rational(L.degree())).mod1();
            Rational sb = (c.at((i + 1) % c.size()).value() * Rational(L.degree())).mod1();
            std::size_t pos = 0;
            while (pos < m && !(im.at(pos).value() == sa)) ++pos;
            if (pos == m || !(im.at((pos + 1) % m).value() == sb)) {
                rep.violations.push_back(
                    {"D3", "hole (" + c.at(i).value().str() + ", " +
                               c.at((i + 1) % c.size()).value().str() + ") of " + c.str() +
                               " does not map onto a hole of " + im.str()});
            }
        }
    }

    rep.notes.push_back("all stored classes are finite by representation");
    return rep;
}

// ----------------------------------------------------------- pullback engine

namespace {

// Enumerates partitions of the leftover fiber R (circularly sorted) into at
// most `limit` parts, each mapping exactly onto the parent class, parts
// pairwise non-crossing (stack discipline) and non-crossing with every stored
// class (chord index).  Stops once two distinct partitions are known.
struct PartitionSearch {
    const std::vector<Rational>& R;
    std::vector<Rational> img;  // sigma of each element
    std::set<Rational> parent_set;
    int limit;
    const ChordIndex& index;
    std::vector<std::vector<std::vector<Rational>>> found;

    std::vector<std::vector<Rational>> stack;
    std::vector<std::set<Rational>> stack_img;
    std::vector<std::vector<Rational>> closed;

    bool block_complete(std::size_t j) const { return stack_img[j] == parent_set; }

    int missing_total() const {
        int m = 0;
        for (const auto& s : stack_img) m += (int)(parent_set.size() - s.size());
        return m;
    }

    void record() {
        std::vector<std::vector<Rational>> parts = closed;
        for (const auto& b : stack) parts.push_back(b);
        for (const auto& p : parts) {
            std::vector<Angle> as;
            for (const auto& r : p) as.push_back(Angle::from_rational(r));
            if (index.class_conflicts(AngleClass::of_exact(std::move(as)))) return;
        }
        std::sort(parts.begin(), parts.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (const auto& f : found)
            if (f == parts) return;
        found.push_back(std::move(parts));
    }

    void run(std::size_t i) {
        if (found.size() >= 2) return;
        if (i == R.size()) {
            for (std::size_t j = 0; j < stack.size(); ++j)
                if (!block_complete(j)) return;
            record();
            return;
        }
        if (missing_total() > (int)(R.size() - i)) return;
        // open a fresh part
        if ((int)(closed.size() + stack.size()) < limit) {
            stack.push_back({R[i]});
            stack_img.push_back({img[i]});
            run(i + 1);
            stack.pop_back();
            stack_img.pop_back();
        }
        // join part j, closing everything stacked above it (blocks close in
        // last-opened-first order, which is exactly the non-crossing rule)
        for (std::size_t j = stack.size(); j-- > 0;) {
            bool closable = true;
            for (std::size_t k = j + 1; k < stack.size(); ++k)
                if (!block_complete(k)) { closable = false; break; }
            if (!closable) continue;
            auto saved_stack = stack;
            auto saved_img = stack_img;
            auto saved_closed = closed;
            for (std::size_t k = j + 1; k < stack.size(); ++k) closed.push_back(stack[k]);
            stack.resize(j + 1);
            stack_img.resize(j + 1);
            stack[j].push_back(R[i]);
            stack_img[j].insert(img[i]);
            run(i + 1);
            stack = std::move(saved_stack);
            stack_img = std::move(saved_img);
            closed = std::move(saved_closed);
        }
    }
};

void place_preimages(Lamination& L, int pid, int gen, std::vector<int>& added) {
    const AngleClass parent = L.info(pid).cls;  // copy: vector may reallocate
    const int d = L.degree();

    std::vector<Rational> fiber;
    for (const auto& a : parent.angles()) {
        const Rational& v = a.value();
        for (int k = 0; k < d; ++k)
            fiber.push_back(Rational::from_i128(
                (__int128)v.num() + (__int128)k * v.den(), (__int128)v.den() * d));
    }
    std::sort(fiber.begin(), fiber.end());
    fiber.erase(std::unique(fiber.begin(), fiber.end()), fiber.end());

    const std::vector<int> pre = L.siblings_of(pid);
    std::set<Rational> covered;
    for (int id : pre)
        for (const auto& a : L.info(id).cls.angles()) covered.insert(a.value());

    std::vector<Rational> R;
    for (const auto& f : fiber)
        if (!covered.count(f)) R.push_back(f);
    if (R.empty()) return;

    PartitionSearch search{R, {}, {}, d - (int)pre.size(), L.chord_index(), {}, {}, {}, {}};
    for (const auto& r : R)
        search.img.push_back((r * Rational(d)).mod1());
    for (const auto& a : parent.angles()) search.parent_set.insert(a.value());
    if (search.limit > 0) search.run(0);

    if (search.found.size() != 1)
        throw AmbiguousPullback(parent.str(), gen, (int)search.found.size());

    for (const auto& part : search.found.front()) {
        std::vector<Angle> as;
        for (const auto& r : part) as.push_back(Angle::from_rational(r));
        int id = L.add_class(AngleClass::of_exact(std::move(as)), gen, false);
        L.set_image(id, pid);
        added.push_back(id);
    }
}

}  // namespace

Lamination pullback_closure(int degree, const std::vector<AngleClass>& generators, int depth) {
    if (degree < 2) throw std::invalid_argument("degree must be at least 2");
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    if (generators.empty()) throw std::invalid_argument("no generator classes");

    for (const auto& g : generators)
        if (!g.exact())
            throw ForwardOrbitDiverges(
                "generator " + g.str() +
                " carries a digit-stream angle; its forward orbit never closes up");

    // drop exact duplicates, keep first occurrence
    std::vector<AngleClass> gens;
    for (const auto& g : generators) {
        bool dup = false;
        for (const auto& h : gens) dup = dup || h.key() == g.key();
        if (!dup) gens.push_back(g);
    }

    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            for (const auto& a : gens[i].angles())
                if (gens[j].contains_exact(a.value()))
                    throw LaminationError("generators share the angle " + a.value().str() +
                                          ": " + gens[i].str() + " and " + gens[j].str());
            if (!AngleClass::unlinked(gens[i], gens[j], 0))
                throw LinkedGenerators(gens[i].str() + " and " + gens[j].str());
        }

    Lamination L(degree, depth);

    // forward closure, all generation 0
    std::vector<int> queue;
    for (const auto& g : gens) {
        if (L.find(g) != -1) continue;
        queue.push_back(L.add_class(g, 0, true));
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int id = queue[qi];
        AngleClass im = class_image(L.info(id).cls, degree);
        int j = L.find(im);
        if (j == -1) {
            j = L.add_class(std::move(im), 0, false);
            queue.push_back(j);
        }
        L.set_image(id, j);
    }
    L.set_generators(gens);

    std::vector<int> parents = queue;
    for (int g = 1; g <= depth && !parents.empty(); ++g) {
        std::sort(parents.begin(), parents.end(), [&](int a, int b) {
            return L.info(a).cls.key() < L.info(b).cls.key();
        });
        std::vector<int> added;
        for (int pid : parents) place_preimages(L, pid, g, added);
        parents = std::move(added);
    }

    L.compute_orbit_data();
    return L;
}

std::pair<int, int> orbit_portrait(const AngleClass& c, int degree) {
    if (!c.exact())
        throw ForwardOrbitDiverges("class " + c.str() +
                                   " carries a digit-stream angle; orbit cannot close up");
    std::map<std::vector<Rational>, int> seen;
    std::vector<AngleClass> orbit{c};
    for (int step = 0;; ++step) {
        auto key = orbit.back().key();
        auto it = seen.find(key);
        if (it != seen.end()) return {it->second, step - it->second};
        seen.emplace(std::move(key), step);
        orbit.push_back(class_image(orbit.back(), degree));
    }
}

}  // namespace lamdyn
