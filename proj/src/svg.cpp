#include "lamdyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace lamdyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double angle_value(const Angle& a) {
    Rational r = a.value();
    return (double)r.num() / (double)r.den();
}

std::pair<double, double> on_circle(double theta, double cx, double cy, double r) {
    return {cx + r * std::cos(2 * kPi * theta), cy - r * std::sin(2 * kPi * theta)};
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#17becf", "#bcbd22", "#e377c2", "#8c564b", "#7f7f7f"};

const char* orbit_color(const ClassInfo& ci) {
    if (ci.preperiod < 0 || ci.period < 0) return "#9aa0a6";
    return kPalette[(std::size_t)(ci.period * 7 + ci.preperiod) %
                    (sizeof kPalette / sizeof *kPalette)];
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::string class_text(const AngleClass& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ' ';
        out += c.at(i).str();
    }
    return xml_escape(out);
}

}  // namespace

std::string render_disk_svg(const Lamination& L) {
    const double cx = 410, cy = 410, r = 380;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"820\" height=\"820\" "
          "viewBox=\"0 0 820 820\">\n";
    os << "<rect width=\"820\" height=\"820\" fill=\"#ffffff\"/>\n";
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
    for (int id : L.sorted_ids()) {
        const ClassInfo& ci = L.info(id);
        const char* color = orbit_color(ci);
        const AngleClass& c = ci.cls;
        if (c.size() == 1) {
            auto [x, y] = on_circle(angle_value(c.at(0)), cx, cy, r);
            os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
               << "\" r=\"3\" fill=\"" << color << "\"><title>" << class_text(c)
               << "</title></circle>\n";
        } else if (c.size() == 2) {
            auto [x0, y0] = on_circle(angle_value(c.at(0)), cx, cy, r);
            auto [x1, y1] = on_circle(angle_value(c.at(1)), cx, cy, r);
            os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
               << "\" y2=\"" << fmt(y1) << "\" stroke=\"" << color
               << "\" stroke-width=\"1.2\"><title>" << class_text(c) << "</title></line>\n";
        } else {
            os << "<polygon points=\"";
            for (std::size_t i = 0; i < c.size(); ++i) {
                auto [x, y] = on_circle(angle_value(c.at(i)), cx, cy, r);
                if (i) os << ' ';
                os << fmt(x) << ',' << fmt(y);
            }
            os << "\" fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"" << color
               << "\" stroke-width=\"1.2\"><title>" << class_text(c) << "</title></polygon>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_tree_svg(const DendriteApprox& D) {
    const Lamination& L = D.lamination();
    std::size_t n = D.vertex_count();
    std::vector<int> order = L.sorted_ids();
    std::vector<int> rank(n, 0);
    for (std::size_t i = 0; i < order.size(); ++i) rank[(std::size_t)order[i]] = (int)i;

    // depth-first layout: leaves take consecutive angular slots, inner
    // vertices sit at the average of their children, radius grows with level
    std::vector<int> level(n, -1);
    std::vector<double> slot(n, 0);
    int leaves = 0, max_level = 0;
    int root = order.empty() ? 0 : order[0];
    struct Frame {
        int id, parent;
        std::size_t next = 0;
        std::vector<int> kids;
        double acc = 0;
        int cnt = 0;
    };
    std::vector<Frame> stack;
    auto kids_of = [&](int id, int parent) {
        std::vector<int> ks;
        for (int nb : D.adjacency()[(std::size_t)id])
            if (nb != parent) ks.push_back(nb);
        std::sort(ks.begin(), ks.end(),
                  [&](int a, int b) { return rank[(std::size_t)a] < rank[(std::size_t)b]; });
        return ks;
    };
    if (n) {
        level[(std::size_t)root] = 0;
        stack.push_back({root, -1, 0, kids_of(root, -1), 0, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < f.kids.size()) {
                int k = f.kids[f.next++];
                level[(std::size_t)k] = level[(std::size_t)f.id] + 1;
                if (level[(std::size_t)k] > max_level) max_level = level[(std::size_t)k];
                stack.push_back({k, f.id, 0, kids_of(k, f.id), 0, 0});
            } else {
                double s;
                if (f.kids.empty()) s = (double)leaves++;
                else s = f.acc / f.cnt;
                slot[(std::size_t)f.id] = s;
                stack.pop_back();
                if (!stack.empty()) {
                    stack.back().acc += s;
                    stack.back().cnt += 1;
                }
            }
        }
    }
    if (leaves == 0) leaves = 1;

    const double cx = 410, cy = 410;
    double rstep = max_level ? 330.0 / max_level : 0;
    auto xy = [&](int id) {
        double theta = slot[(std::size_t)id] / leaves;
        double rr = 30 + rstep * level[(std::size_t)id];
        return std::pair<double, double>{cx + rr * std::cos(2 * kPi * theta),
                                         cy - rr * std::sin(2 * kPi * theta)};
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"820\" height=\"820\" "
          "viewBox=\"0 0 820 820\">\n";
    os << "<rect width=\"820\" height=\"820\" fill=\"#ffffff\"/>\n";
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : D.edges()) {
        int a = rank[(std::size_t)u], b = rank[(std::size_t)v];
        if (a > b) std::swap(a, b);
        es.push_back({a, b});
    }
    std::sort(es.begin(), es.end());
    for (auto [a, b] : es) {
        auto [x0, y0] = xy(order[(std::size_t)a]);
        auto [x1, y1] = xy(order[(std::size_t)b]);
        os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
           << "\" y2=\"" << fmt(y1) << "\" stroke=\"#888888\" stroke-width=\"1.2\"/>\n";
    }
    for (int id : order) {
        const AngleClass& c = L.info(id).cls;
        ClassKind k = point_kind(c).kind;
        const char* color = k == ClassKind::bud    ? "#2a9d8f"
                            : k == ClassKind::leaf ? "#457b9d"
                                                   : "#e63946";
        auto [x, y] = xy(id);
        os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\""
           << (c.size() >= 3 ? 6 : 4) << "\" fill=\"" << color << "\"><title>"
           << class_text(c) << "</title></circle>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lamdyn
