#include <doctest.h>

#include "lamdyn/io.hpp"
#include "lamdyn/svg.hpp"

#include <cstdio>
#include <set>
#include <sstream>

using namespace lamdyn;

namespace {

Rational R_(std::int64_t p, std::int64_t q) { return Rational(p, q); }
AngleClass C(std::initializer_list<Rational> rs) { return AngleClass::of_rationals(rs); }

std::vector<AngleClass> quad_seed() {
    return {C({R_(1, 12), R_(7, 12)}), C({R_(1, 7), R_(2, 7), R_(4, 7)})};
}

mpq_class Q(long p, long q) {
    mpq_class v(p, q);
    v.canonicalize();
    return v;
}

int count_sub(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    std::size_t at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("spec files parse with keys in any order") {
    const char* canonical =
        "degree = 2\n"
        "depth = 4\n"
        "generators = 1/12 7/12 | 1/7 2/7 4/7\n";
    const char* shuffled =
        "# build request\n"
        "generators = 1/12   7/12 | 1/7 2/7 4/7   # seed classes\n"
        "\n"
        "depth = 4\n"
        "degree = 2\n";
    LaminationSpecFile a = parse_lamination_spec(canonical);
    LaminationSpecFile b = parse_lamination_spec(shuffled);
    CHECK(a.degree == 2);
    CHECK(a.depth == 4);
    REQUIRE(a.generators.size() == 2);
    CHECK(a.generators[0].size() == 2);
    CHECK(a.generators[1].size() == 3);
    CHECK(a.generators[0][0].str() == "1/12");
    CHECK(write_lamination_spec(a) == canonical);
    CHECK(write_lamination_spec(b) == write_lamination_spec(a));

    LaminationSpecFile again = parse_lamination_spec(write_lamination_spec(a));
    CHECK(write_lamination_spec(again) == canonical);
}

TEST_CASE("spec files accept every seed syntax") {
    LaminationSpecFile s = parse_lamination_spec(
        "degree = 3\n"
        "depth = 2\n"
        "generators = base=3;pre=;per=1 | sturmian(alpha=1/2,rho=1/3) 2/3\n");
    REQUIRE(s.generators.size() == 2);
    CHECK(s.generators[0][0].str() == "base=3;pre=;per=1");
    CHECK(s.generators[1][0].str() == "sturmian(alpha=1/2,rho=1/3)");
    CHECK(!s.generators[1][0].exact());
    CHECK(s.generators[1][1].exact());

    std::vector<AngleClass> cls = spec_generator_classes(s, 40);
    REQUIRE(cls.size() == 2);
    CHECK(cls[0].size() == 1);
    CHECK(cls[1].size() == 2);

    LaminationSpecFile exact = parse_lamination_spec(
        "degree = 2\ndepth = 1\ngenerators = 1/12 7/12 | 1/7 2/7 4/7\n");
    std::vector<AngleClass> ecls = spec_generator_classes(exact, 40);
    REQUIRE(ecls.size() == 2);
    CHECK(ecls[0].size() == 2);
    CHECK(ecls[1].size() == 3);
}

TEST_CASE("spec file errors carry line and column") {
    auto fails = [](const std::string& text, int line, const std::string& piece) {
        try {
            parse_lamination_spec(text);
            FAIL_CHECK("expected a parse error for: " << piece);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
            CHECK(std::string(e.what()).find(piece) != std::string::npos);
        }
    };
    fails("degree = 2\nnonsense\n", 2, "expected 'key = value'");
    fails("degree = 2\ndegree = 2\n", 2, "duplicate key 'degree'");
    fails("degree = 2\ncolor = red\n", 2, "unknown key 'color'");
    fails("depth = 2\ngenerators = 1/3 2/3\n", 2, "missing key 'degree'");
    fails("degree = 2\ngenerators = 1/3 2/3\n", 2, "missing key 'depth'");
    fails("degree = 2\ndepth = 2\n", 2, "missing key 'generators'");
    fails("degree = 1\ndepth = 2\ngenerators = 1/3\n", 1, "degree must be at least 2");
    fails("degree = 2\ndepth = -1\ngenerators = 1/3\n", 2, "depth must be nonnegative");
    fails("degree = two\ndepth = 2\ngenerators = 1/3\n", 1, "bad degree 'two'");
    fails("degree = 2 2\ndepth = 2\ngenerators = 1/3\n", 1, "unexpected token after degree");
    fails("degree = 2\ndepth = 2\ngenerators = 1/3 | | 2/3\n", 3, "empty generator class");
    fails("degree = 2\ndepth = 2\ngenerators = 1/Q\n", 3, "bad angle '1/Q'");

    try {
        parse_lamination_spec("degree = 2\ndepth = 2\ngenerators = 1/3 oops/\n");
        FAIL_CHECK("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col == 18);
        CHECK(std::string(e.what()).find("bad angle 'oops/'") != std::string::npos);
    }
}

TEST_CASE("written laminations list every class with its orbit data") {
    Lamination L = pullback_closure(2, quad_seed(), 2);
    std::string text = write_lamination(L);

    CHECK(text.find("degree = 2\n") == 0);
    CHECK(count_sub(text, "depth = 2\n") == 1);
    CHECK(count_sub(text, "classes = " + std::to_string(L.size()) + "\n") == 1);
    CHECK(count_sub(text, "class = ") == (int)L.size());
    CHECK(count_sub(text, " ; generation = ") == (int)L.size());
    CHECK(count_sub(text, " ; preperiod = ") == (int)L.size());
    CHECK(count_sub(text, " ; period = ") == (int)L.size());
    CHECK(count_sub(text, " ; generator") == 2);
    CHECK(count_sub(text, "class = 1/12 7/12 ;") == 1);
    CHECK(count_sub(text, "class = 1/7 2/7 4/7 ;") == 1);

    // the fixed class in the quadratic family is periodic with period 1
    Lamination L0 = pullback_closure(2, {C({R_(1, 7), R_(2, 7), R_(4, 7)})}, 3);
    std::string t0 = write_lamination(L0);
    CHECK(count_sub(t0, "class = 1/7 2/7 4/7 ; generation = 0 ; preperiod = 0 ; period = 1 ; "
                        "generator") == 1);
}

TEST_CASE("tree export lines carry kind, valence, depth and image") {
    DendriteApprox D = build_dendrite(pullback_closure(2, quad_seed(), 2));
    const Lamination& L = D.lamination();
    std::string text = write_tree(D);

    std::string header = text.substr(0, text.find('\n'));
    CHECK(header.find("# dendrite depth=2 vertices=" + std::to_string(D.vertex_count()) +
                      " edges=" + std::to_string(D.edges().size())) == 0);
    CHECK(header.find("saturated=") != std::string::npos);

    int vertex_lines = 0, edge_lines = 0;
    std::set<std::string> kinds;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (line.find(" -- ") != std::string::npos) {
            ++edge_lines;
        } else {
            ++vertex_lines;
            int semis = count_sub(line, "; ");
            CHECK(semis == 4);
            bool named = line.find("; endpoint; ") != std::string::npos ||
                         line.find("; cutpoint; ") != std::string::npos ||
                         line.find("; branchpoint; ") != std::string::npos;
            CHECK(named);
        }
    }
    CHECK(vertex_lines == (int)D.vertex_count());
    CHECK(edge_lines == (int)D.edges().size());
    CHECK(edge_lines + 1 == vertex_lines);

    // pullback families are closed under the map, so nothing is frontier
    for (int id : L.sorted_ids()) CHECK(!D.frontier(id));
    CHECK(count_sub(text, "FRONTIER") == 0);

    CHECK(write_tree(D) == text);

    // a family with an unresolved image reports the class as FRONTIER
    Lamination M(2, 0);
    int inner = M.add_class(C({R_(1, 9), R_(2, 9)}), 0, true);
    (void)inner;
    std::string mt = write_tree(build_dendrite(std::move(M)));
    CHECK(count_sub(mt, "FRONTIER") == 1);
    CHECK(mt.find("1/9 2/9; cutpoint; 2; 0; FRONTIER\n") != std::string::npos);
}

TEST_CASE("markov map files round-trip byte for byte") {
    std::vector<MarkovTreeMap> maps;
    maps.push_back(tent_map());
    maps.push_back(stefan_map(5));
    maps.push_back(star_rotation(3));
    maps.push_back(truncated_tent(Q(4, 5)));
    maps.push_back(identity_interval_map());
    for (const MarkovTreeMap& f : maps) {
        std::string text = write_markov_map(f);
        CHECK(text.rfind("markov-tree-map\n", 0) == 0);
        MarkovTreeMap g = parse_markov_map(text);
        CHECK(write_markov_map(g) == text);
        CHECK(g.vertex_count() == f.vertex_count());
        CHECK(g.edges().size() == f.edges().size());
    }

    MarkovTreeMap g = parse_markov_map(write_markov_map(tent_map()));
    PeriodSet ps = exact_periods(g, 6);
    CHECK(ps.realized == std::set<long>{1, 2, 3, 4, 5, 6});

    // comments and blank lines are fine anywhere
    std::string text = write_markov_map(stefan_map(3));
    MarkovTreeMap h = parse_markov_map("# spiral\n\n" + text + "\n# end\n");
    CHECK(write_markov_map(h) == text);
}

TEST_CASE("markov map files are cross-checked against their own geometry") {
    std::string text = write_markov_map(tent_map());

    std::string wrong_coord = replace_once(text, "vertex 1 coord 1/2", "vertex 1 coord 1/3");
    try {
        parse_markov_map(wrong_coord);
        FAIL_CHECK("expected a coordinate mismatch");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("does not match the edge lengths") !=
              std::string::npos);
        CHECK(std::string(e.what()).find("1/3") != std::string::npos);
    }

    std::string wrong_slope = replace_once(text, "slope 2", "slope 3");
    try {
        parse_markov_map(wrong_slope);
        FAIL_CHECK("expected a slope mismatch");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("slope 3 does not match the image path (2)") !=
              std::string::npos);
    }
}

TEST_CASE("markov map parse errors name the offending line") {
    auto fails = [](const std::string& text, const std::string& piece) {
        try {
            parse_markov_map(text);
            FAIL_CHECK("expected a parse error for: " << piece);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(piece) != std::string::npos);
        }
    };
    fails("", "empty map file");
    fails("interval-map\n", "expected 'markov-tree-map'");
    fails("markov-tree-map\nvertices = 1\n", "vertex count must be at least 2");
    fails("markov-tree-map\nvertices = 2\n", "unexpected end of file");
    fails("markov-tree-map\nvertices = 2\nvertex 1 coord 0\n", "expected vertex 0");

    std::string text = write_markov_map(stefan_map(3));
    // move the last piece line in front of the first one
    std::size_t cut = text.find("piece ");
    std::size_t last = text.rfind("piece ");
    std::string head = text.substr(0, cut);
    std::string tail = text.substr(cut, last - cut);
    std::string moved = text.substr(last);
    fails(head + moved + tail, "pieces must be grouped by ascending edge");

    std::string junk = replace_once(write_markov_map(tent_map()), "image 0 -> 0",
                                    "image 0 -> 0 twice");
    fails(junk, "unexpected token after image");
}

TEST_CASE("disk pictures are deterministic and draw every class") {
    Lamination L = pullback_closure(2, quad_seed(), 2);
    std::string svg = render_disk_svg(L);
    CHECK(render_disk_svg(L) == svg);
    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    int buds = 0, leaves = 0, gaps = 0;
    for (int id : L.sorted_ids()) {
        std::size_t n = L.info(id).cls.size();
        if (n == 1) ++buds;
        else if (n == 2) ++leaves;
        else ++gaps;
    }
    CHECK(count_sub(svg, "<line ") == leaves);
    CHECK(count_sub(svg, "<polygon ") == gaps);
    CHECK(count_sub(svg, "<circle ") == buds + 1);
    CHECK(count_sub(svg, "<title>1/7 2/7 4/7</title>") == 1);
    CHECK(gaps >= 2);
}

TEST_CASE("tree pictures place every vertex and edge") {
    DendriteApprox D = build_dendrite(pullback_closure(2, quad_seed(), 3));
    std::string svg = render_tree_svg(D);
    CHECK(render_tree_svg(D) == svg);
    CHECK(count_sub(svg, "<circle ") == (int)D.vertex_count());
    CHECK(count_sub(svg, "<line ") == (int)D.edges().size());
    CHECK(count_sub(svg, "#e63946") > 0);   // branch vertices present
    CHECK(count_sub(svg, "#2a9d8f") > 0);   // endpoints present

    DendriteApprox single = build_dendrite([] {
        Lamination L(2, 0);
        int id = L.add_class(C({R_(0, 1)}), 0, true);
        L.set_image(id, id);
        return L;
    }());
    std::string one = render_tree_svg(single);
    CHECK(count_sub(one, "<circle ") == 1);
    CHECK(count_sub(one, "<line ") == 0);
}

TEST_CASE("files write and read back verbatim") {
    std::string path = "io_roundtrip_scratch.txt";
    std::string content = "line one\nline two\n";
    content.push_back('\0');
    content += "\xff" "binary tail";
    write_file(path, content);
    CHECK(read_file(path) == content);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)read_file(path), std::runtime_error);
}
