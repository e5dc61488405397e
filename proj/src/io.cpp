#include "lamdyn/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace lamdyn {

namespace {

std::string class_repr(const AngleClass& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ' ';
        out += c.at(i).str();
    }
    return out;
}

struct Line {
    std::string text;
    int number;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::string cur;
    int n = 1;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back({cur, n++});
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back({cur, n});
    return lines;
}

// cursor over one line, reporting 1-based columns
struct Scanner {
    const std::string& s;
    int line;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    int col() const { return (int)pos + 1; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, col(), what); }

    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace((unsigned char)s[pos])) ++pos;
        if (start == pos) throw ParseError(line, (int)start + 1, "unexpected end of line");
        return s.substr(start, pos - start);
    }
    void expect(const std::string& lit) {
        skip_ws();
        std::size_t start = pos;
        std::string w = word();
        if (w != lit)
            throw ParseError(line, (int)start + 1,
                             "expected '" + lit + "', found '" + w + "'");
    }
    int integer(const std::string& what) {
        skip_ws();
        std::size_t start = pos;
        std::string w = word();
        try {
            std::size_t used = 0;
            int v = std::stoi(w, &used);
            if (used != w.size()) throw std::invalid_argument(w);
            return v;
        } catch (const std::exception&) {
            throw ParseError(line, (int)start + 1, "bad " + what + " '" + w + "'");
        }
    }
    mpq_class rational(const std::string& what) {
        skip_ws();
        std::size_t start = pos;
        std::string w = word();
        return rational_token(w, (int)start + 1, what);
    }
    mpq_class rational_token(const std::string& w, int at, const std::string& what) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            char c = w[i];
            bool ok = std::isdigit((unsigned char)c) || c == '/' || (c == '-' && i == 0);
            if (!ok) throw ParseError(line, at, "bad " + what + " '" + w + "'");
        }
        try {
            mpq_class q(w);
            if (q.get_den() == 0) throw std::invalid_argument(w);
            q.canonicalize();
            return q;
        } catch (const std::exception&) {
            throw ParseError(line, at, "bad " + what + " '" + w + "'");
        }
    }
    TreePoint tree_point(const std::string& what) {
        skip_ws();
        std::size_t start = pos;
        std::string w = word();
        std::size_t at = w.find('@');
        if (at == std::string::npos || at == 0 || at + 1 >= w.size())
            throw ParseError(line, (int)start + 1, "bad " + what + " '" + w + "'");
        TreePoint p;
        try {
            std::size_t used = 0;
            p.edge = std::stoi(w.substr(0, at), &used);
            if (used != at) throw std::invalid_argument(w);
        } catch (const std::exception&) {
            throw ParseError(line, (int)start + 1, "bad " + what + " '" + w + "'");
        }
        p.t = rational_token(w.substr(at + 1), (int)start + 1 + (int)at + 1, what);
        return p;
    }
};

std::string strip_comment(const std::string& s) {
    std::size_t at = s.find('#');
    return at == std::string::npos ? s : s.substr(0, at);
}

bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace((unsigned char)c)) return false;
    return true;
}

}  // namespace

LaminationSpecFile parse_lamination_spec(const std::string& text) {
    LaminationSpecFile out;
    bool saw_degree = false, saw_depth = false, saw_generators = false;
    auto lines = split_lines(text);
    int last_line = lines.empty() ? 1 : lines.back().number;

    for (const Line& ln : lines) {
        std::string body = strip_comment(ln.text);
        if (blank(body)) continue;
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError(ln.number, 1, "expected 'key = value'");
        std::string keypart = body.substr(0, eq);
        Scanner key{keypart, ln.number};
        std::string k = key.word();
        if (!key.done()) key.fail("unexpected token after key '" + k + "'");

        std::string value = body.substr(eq + 1);
        int voff = (int)eq + 1;
        if (k == "degree" || k == "depth") {
            bool& seen = k == "degree" ? saw_degree : saw_depth;
            if (seen) throw ParseError(ln.number, 1, "duplicate key '" + k + "'");
            seen = true;
            Scanner sc{body, ln.number};
            sc.pos = eq + 1;
            int v = sc.integer(k);
            if (!sc.done()) sc.fail("unexpected token after " + k);
            if (k == "degree") {
                if (v < 2) throw ParseError(ln.number, voff + 1, "degree must be at least 2");
                out.degree = v;
            } else {
                if (v < 0) throw ParseError(ln.number, voff + 1, "depth must be nonnegative");
                out.depth = v;
            }
        } else if (k == "generators") {
            if (saw_generators) throw ParseError(ln.number, 1, "duplicate key 'generators'");
            saw_generators = true;
            std::vector<Angle> cls;
            std::size_t p = 0;
            while (p <= value.size()) {
                std::size_t bar = value.find('|', p);
                std::string chunk =
                    value.substr(p, bar == std::string::npos ? std::string::npos : bar - p);
                std::size_t cpos = 0;
                cls.clear();
                while (cpos < chunk.size()) {
                    while (cpos < chunk.size() && std::isspace((unsigned char)chunk[cpos]))
                        ++cpos;
                    if (cpos >= chunk.size()) break;
                    std::size_t start = cpos;
                    while (cpos < chunk.size() && !std::isspace((unsigned char)chunk[cpos]))
                        ++cpos;
                    std::string tok = chunk.substr(start, cpos - start);
                    try {
                        cls.push_back(parse_angle(tok));
                    } catch (const std::exception& e) {
                        throw ParseError(ln.number, voff + (int)p + (int)start + 1,
                                         "bad angle '" + tok + "': " + e.what());
                    }
                }
                if (cls.empty())
                    throw ParseError(ln.number, voff + (int)p + 1, "empty generator class");
                out.generators.push_back(cls);
                if (bar == std::string::npos) break;
                p = bar + 1;
            }
        } else {
            throw ParseError(ln.number, 1, "unknown key '" + k + "'");
        }
    }
    if (!saw_degree) throw ParseError(last_line, 1, "missing key 'degree'");
    if (!saw_depth) throw ParseError(last_line, 1, "missing key 'depth'");
    if (!saw_generators) throw ParseError(last_line, 1, "missing key 'generators'");
    return out;
}

std::string write_lamination_spec(const LaminationSpecFile& s) {
    std::ostringstream os;
    os << "degree = " << s.degree << "\n";
    os << "depth = " << s.depth << "\n";
    os << "generators = ";
    for (std::size_t i = 0; i < s.generators.size(); ++i) {
        if (i) os << " | ";
        for (std::size_t j = 0; j < s.generators[i].size(); ++j) {
            if (j) os << ' ';
            os << s.generators[i][j].str();
        }
    }
    os << "\n";
    return os.str();
}

std::vector<AngleClass> spec_generator_classes(const LaminationSpecFile& s, int precision) {
    std::vector<AngleClass> out;
    for (const auto& g : s.generators) {
        bool exact = true;
        for (const auto& a : g)
            if (!a.exact()) exact = false;
        std::vector<Angle> copy = g;
        out.push_back(exact ? AngleClass::of_exact(std::move(copy))
                            : AngleClass::with_precision(std::move(copy), precision));
    }
    return out;
}

std::string write_lamination(const Lamination& L) {
    std::ostringstream os;
    os << "degree = " << L.degree() << "\n";
    os << "depth = " << L.depth() << "\n";
    os << "classes = " << L.size() << "\n";
    for (int id : L.sorted_ids()) {
        const ClassInfo& ci = L.info(id);
        os << "class = " << class_repr(ci.cls) << " ; generation = " << ci.generation;
        os << " ; preperiod = ";
        if (ci.preperiod < 0) os << "?";
        else os << ci.preperiod;
        os << " ; period = ";
        if (ci.period < 0) os << "?";
        else os << ci.period;
        if (ci.generator) os << " ; generator";
        os << "\n";
    }
    return os.str();
}

std::string write_tree(const DendriteApprox& D) {
    const Lamination& L = D.lamination();
    std::vector<int> order = L.sorted_ids();
    std::vector<int> rank(L.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rank[(std::size_t)order[i]] = (int)i;

    std::ostringstream os;
    os << "# dendrite depth=" << D.depth() << " vertices=" << D.vertex_count()
       << " edges=" << D.edges().size() << " saturated=" << (D.saturated() ? "yes" : "no")
       << "\n";
    for (int id : order) {
        const ClassInfo& ci = L.info(id);
        PointKind pk = point_kind(ci.cls);
        os << class_repr(ci.cls) << "; " << kind_name(pk.kind) << "; " << pk.valence << "; "
           << ci.generation << "; ";
        int img = D.image_of(id);
        if (img < 0) os << "FRONTIER";
        else os << class_repr(L.info(img).cls);
        os << "\n";
    }
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : D.edges()) {
        int a = rank[(std::size_t)u], b = rank[(std::size_t)v];
        es.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(es.begin(), es.end());
    for (auto [a, b] : es)
        os << class_repr(L.info(order[(std::size_t)a]).cls) << " -- "
           << class_repr(L.info(order[(std::size_t)b]).cls) << "\n";
    for (int id : order) {
        PointKind pk = point_kind(L.info(id).cls);
        if (D.tree_degree(id) != pk.valence)
            os << "# tree-degree " << class_repr(L.info(id).cls) << " = " << D.tree_degree(id)
               << " (valence " << pk.valence << ")\n";
    }
    return os.str();
}

std::string write_markov_map(const MarkovTreeMap& f) {
    std::ostringstream os;
    os << "markov-tree-map\n";
    os << "vertices = " << f.vertex_count() << "\n";
    for (int v = 0; v < f.vertex_count(); ++v) {
        mpq_class c = f.path_between(f.vertex_point(0), f.vertex_point(v)).length;
        os << "vertex " << v << " coord " << c.get_str() << "\n";
    }
    for (std::size_t e = 0; e < f.edges().size(); ++e)
        os << "edge " << e << " = " << f.edges()[e].u << " -- " << f.edges()[e].v
           << " length " << f.edges()[e].len.get_str() << "\n";
    for (int v = 0; v < f.vertex_count(); ++v)
        os << "image " << v << " -> " << f.vertex_image()[(std::size_t)v] << "\n";
    for (std::size_t e = 0; e < f.pieces().size(); ++e) {
        for (const auto& pc : f.pieces()[e]) {
            mpq_class slope = 0;
            if (tree_point_compare(f, pc.from, pc.to) != 0)
                slope = f.path_between(pc.from, pc.to).length / (pc.b - pc.a);
            os << "piece " << e << " span " << pc.a.get_str() << " " << pc.b.get_str()
               << " image " << pc.from.edge << "@" << pc.from.t.get_str() << " .. "
               << pc.to.edge << "@" << pc.to.t.get_str() << " slope " << slope.get_str()
               << "\n";
        }
    }
    return os.str();
}

MarkovTreeMap parse_markov_map(const std::string& text) {
    auto all = split_lines(text);
    std::vector<Line> lines;
    for (const auto& ln : all) {
        std::string body = strip_comment(ln.text);
        if (!blank(body)) lines.push_back({body, ln.number});
    }
    if (lines.empty()) throw ParseError(1, 1, "empty map file");
    std::size_t at = 0;
    auto next = [&]() -> Scanner {
        if (at >= lines.size())
            throw ParseError(lines.back().number, 1, "unexpected end of file");
        Scanner sc{lines[at].text, lines[at].number};
        ++at;
        return sc;
    };

    {
        Scanner sc = next();
        sc.expect("markov-tree-map");
        if (!sc.done()) sc.fail("unexpected token after header");
    }
    int vcount;
    {
        Scanner sc = next();
        sc.expect("vertices");
        sc.expect("=");
        vcount = sc.integer("vertex count");
        if (!sc.done()) sc.fail("unexpected token after vertex count");
        if (vcount < 2) sc.fail("vertex count must be at least 2");
    }
    std::vector<mpq_class> coords((std::size_t)vcount);
    for (int v = 0; v < vcount; ++v) {
        Scanner sc = next();
        sc.expect("vertex");
        int idx = sc.integer("vertex index");
        if (idx != v) sc.fail("expected vertex " + std::to_string(v));
        sc.expect("coord");
        coords[(std::size_t)v] = sc.rational("coordinate");
        if (!sc.done()) sc.fail("unexpected token after coordinate");
    }
    std::vector<MarkovTreeMap::Edge> edges;
    for (int e = 0; e + 1 < vcount; ++e) {
        Scanner sc = next();
        sc.expect("edge");
        int idx = sc.integer("edge index");
        if (idx != e) sc.fail("expected edge " + std::to_string(e));
        sc.expect("=");
        int u = sc.integer("vertex index");
        sc.expect("--");
        int v = sc.integer("vertex index");
        sc.expect("length");
        mpq_class len = sc.rational("edge length");
        if (!sc.done()) sc.fail("unexpected token after edge length");
        edges.push_back({u, v, len});
    }
    std::vector<int> img((std::size_t)vcount);
    for (int v = 0; v < vcount; ++v) {
        Scanner sc = next();
        sc.expect("image");
        int idx = sc.integer("vertex index");
        if (idx != v) sc.fail("expected image " + std::to_string(v));
        sc.expect("->");
        img[(std::size_t)v] = sc.integer("vertex index");
        if (!sc.done()) sc.fail("unexpected token after image");
    }
    std::vector<std::vector<MarkovTreeMap::Piece>> pieces((std::size_t)(vcount - 1));
    std::vector<mpq_class> slopes;  // validated after construction, in piece order
    std::vector<int> slope_lines;
    int last_edge = 0;
    while (at < lines.size()) {
        Scanner sc = next();
        sc.expect("piece");
        int e = sc.integer("edge index");
        if (e < 0 || e >= vcount - 1) sc.fail("edge index out of range");
        if (e < last_edge) sc.fail("pieces must be grouped by ascending edge");
        last_edge = e;
        sc.expect("span");
        MarkovTreeMap::Piece pc;
        pc.a = sc.rational("span start");
        pc.b = sc.rational("span end");
        sc.expect("image");
        pc.from = sc.tree_point("image endpoint");
        sc.expect("..");
        pc.to = sc.tree_point("image endpoint");
        sc.expect("slope");
        mpq_class sl = sc.rational("slope");
        if (!sc.done()) sc.fail("unexpected token after slope");
        pieces[(std::size_t)e].push_back(pc);
        slopes.push_back(sl);
        slope_lines.push_back(sc.line);
    }

    MarkovTreeMap f = [&]() {
        try {
            return MarkovTreeMap(vcount, edges, img, pieces);
        } catch (const std::exception& e) {
            throw ParseError(lines.back().number, 1, e.what());
        }
    }();

    for (int v = 0; v < vcount; ++v) {
        mpq_class c = f.path_between(f.vertex_point(0), f.vertex_point(v)).length;
        if (c != coords[(std::size_t)v])
            throw ParseError(lines.back().number, 1,
                             "vertex " + std::to_string(v) + " coordinate " +
                                 coords[(std::size_t)v].get_str() +
                                 " does not match the edge lengths (" + c.get_str() + ")");
    }
    std::size_t k = 0;
    for (std::size_t e = 0; e < f.pieces().size(); ++e) {
        for (const auto& pc : f.pieces()[e]) {
            mpq_class slope = 0;
            if (tree_point_compare(f, pc.from, pc.to) != 0)
                slope = f.path_between(pc.from, pc.to).length / (pc.b - pc.a);
            if (slopes[k] != slope)
                throw ParseError(slope_lines[k], 1,
                                 "slope " + slopes[k].get_str() +
                                     " does not match the image path (" + slope.get_str() +
                                     ")");
            ++k;
        }
    }
    return f;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace lamdyn
