#include "lamdyn/dendrite.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace lamdyn {

DendriteApprox::DendriteApprox(Lamination lam) : lam_(std::move(lam)) {
    const std::size_t n = lam_.size();
    if (n == 0) throw std::invalid_argument("cannot model an empty lamination");

    // crossing classes have no tree quotient; fail loudly before building
    for (std::size_t id = 0; id < n; ++id) {
        const auto& c = lam_.info((int)id).cls;
        if (lam_.chord_index().class_conflicts(c))
            throw NotATree("class " + c.str() +
                           " crosses another stored class; the quotient is not a tree");
    }

    // hull spans [first angle, last angle], linearized by cutting the circle
    // just before the smallest stored angle so no span wraps.  Unlinked
    // disjoint classes give a laminar interval family.
    std::vector<int> order((std::size_t)n);
    for (std::size_t i = 0; i < n; ++i) order[i] = (int)i;
    auto lo = [&](int id) { return lam_.info(id).cls.at(0).value(); };
    auto hi = [&](int id) {
        const auto& c = lam_.info(id).cls;
        return c.at(c.size() - 1).value();
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (!(lo(a) == lo(b))) return lo(a) < lo(b);
        return hi(b) < hi(a);
    });

    nest_parent_.assign(n, -1);
    std::vector<int> roots;
    std::vector<std::vector<int>> children(n);
    std::vector<int> stack;
    for (int id : order) {
        while (!stack.empty() && hi(stack.back()) < lo(id)) stack.pop_back();
        if (stack.empty()) {
            roots.push_back(id);
        } else {
            nest_parent_[(std::size_t)id] = stack.back();
            children[(std::size_t)stack.back()].push_back(id);
        }
        stack.push_back(id);
    }

    adj_.assign(n, {});
    chain_interior_.assign(n, 0);
    auto link = [&](int a, int b) {
        adj_[(std::size_t)a].push_back(b);
        adj_[(std::size_t)b].push_back(a);
        edges_.emplace_back(a, b);
    };

    // chain the root classes in circular order
    for (std::size_t i = 1; i < roots.size(); ++i) link(roots[i - 1], roots[i]);
    for (std::size_t i = 1; i + 1 < roots.size(); ++i)
        chain_interior_[(std::size_t)roots[i]] = 1;

    // inside each hole of each class, chain the directly nested classes and
    // attach the chain head to the holding class
    for (std::size_t id = 0; id < n; ++id) {
        const auto& kids = children[id];
        if (kids.empty()) continue;
        const auto& c = lam_.info((int)id).cls;
        std::vector<std::vector<int>> per_hole(c.size() == 1 ? 1 : c.size());
        for (int kid : kids) {
            auto h = c.hole_of(lam_.info(kid).cls.at(0), 0);
            if (!h)
                throw NotATree("nested class shares an angle with its host");
            per_hole[*h].push_back(kid);  // kids arrive sorted by first angle
        }
        for (const auto& chain : per_hole) {
            for (std::size_t i = 0; i < chain.size(); ++i)
                link(i == 0 ? (int)id : chain[i - 1], chain[i]);
            // every chain member short of the last has the host (or an earlier
            // sibling) behind it and a sibling ahead, all in one hole
            for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                chain_interior_[(std::size_t)chain[i]] = 1;
        }
    }

    // structural safety net; the construction above should make this
    // unreachable for any store that passed the crossing scan
    if (edges_.size() != n - 1)
        throw NotATree("edge count " + std::to_string(edges_.size()) + " for " +
                       std::to_string(n) + " vertices");
    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int w : adj_[(std::size_t)v])
            if (!seen[(std::size_t)w]) {
                seen[(std::size_t)w] = 1;
                ++reached;
                bfs.push(w);
            }
    }
    if (reached != n) throw NotATree("graph is disconnected");
}

std::vector<int> DendriteApprox::arc_between(int u, int v) const {
    const std::size_t n = lam_.size();
    std::vector<int> prev(n, -2);
    std::queue<int> bfs;
    bfs.push(u);
    prev[(std::size_t)u] = -1;
    while (!bfs.empty() && prev[(std::size_t)v] == -2) {
        int x = bfs.front();
        bfs.pop();
        for (int w : adj_[(std::size_t)x])
            if (prev[(std::size_t)w] == -2) {
                prev[(std::size_t)w] = x;
                bfs.push(w);
            }
    }
    std::vector<int> path;
    for (int x = v; x != -1; x = prev[(std::size_t)x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

bool DendriteApprox::separates(int x, int y, int z) const {
    if (x == y || x == z) throw std::invalid_argument("separation point must differ from ends");

    // route 1: tree components after deleting x
    bool tree_sep = true;
    if (y == z) {
        tree_sep = false;
    } else {
        std::vector<char> seen(lam_.size(), 0);
        seen[(std::size_t)x] = 1;
        std::queue<int> bfs;
        bfs.push(y);
        seen[(std::size_t)y] = 1;
        bool hit = false;
        while (!bfs.empty() && !hit) {
            int v = bfs.front();
            bfs.pop();
            for (int w : adj_[(std::size_t)v]) {
                if (w == z) { hit = true; break; }
                if (!seen[(std::size_t)w]) {
                    seen[(std::size_t)w] = 1;
                    bfs.push(w);
                }
            }
        }
        tree_sep = !hit;
    }

    // route 2: hole membership around x
    const auto& cx = lam_.info(x).cls;
    auto hy = cx.hole_of(lam_.info(y).cls.at(0), 0);
    auto hz = cx.hole_of(lam_.info(z).cls.at(0), 0);
    if (!hy || !hz) throw LaminationError("separation query on non-disjoint classes");
    bool hole_sep = *hy != *hz;

    // distinct holes always mean distinct tree components; the converse can
    // fail only at a chain-interior vertex, where both chain sides share a hole
    if (hole_sep && !tree_sep)
        throw LaminationError("separation routes disagree for " + cx.str());
    if (!chain_interior_[(std::size_t)x] && tree_sep != hole_sep)
        throw LaminationError("separation routes disagree for " + cx.str());
    return tree_sep;
}

bool DendriteApprox::saturated() const {
    for (char f : chain_interior_)
        if (f) return false;
    return true;
}

DendriteApprox build_dendrite(Lamination L) { return DendriteApprox(std::move(L)); }

PointKind point_kind(const AngleClass& c) {
    return {c.kind(), (int)c.size()};
}

bool is_persistent_cutpoint(const AngleClass& c, int degree) {
    if (!c.exact())
        throw ForwardOrbitDiverges("class " + c.str() +
                                   " carries a digit-stream angle; orbit cannot close up");
    if (c.size() < 2) return false;
    std::set<std::vector<Rational>> seen;
    AngleClass cur = c;
    while (seen.insert(cur.key()).second) {
        if (cur.size() < 2) return false;
        cur = class_image(cur, degree);
    }
    return cur.size() >= 2;
}

}  // namespace lamdyn
