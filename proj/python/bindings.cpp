#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lamdyn/io.hpp"
#include "lamdyn/svg.hpp"

namespace py = pybind11;
using namespace lamdyn;

namespace {

Lamination build_from_text(const std::string& spec_text, int depth, int precision) {
    LaminationSpecFile spec = parse_lamination_spec(spec_text);
    int d = depth >= 0 ? depth : spec.depth;
    return pullback_closure(spec.degree, spec_generator_classes(spec, precision), d);
}

AngleClass seed_from_text(const std::string& s, int precision) {
    std::vector<Angle> angles;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t plus = s.find('+', pos);
        std::string tok =
            s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        if (tok.empty()) throw std::invalid_argument("empty angle in seed '" + s + "'");
        angles.push_back(parse_angle(tok));
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    bool exact = true;
    for (const auto& a : angles)
        if (!a.exact()) exact = false;
    return exact ? AngleClass::of_exact(std::move(angles))
                 : AngleClass::with_precision(std::move(angles), precision);
}

SharkType shark_from_text(const std::string& s) {
    if (s == "2^infinity") return SharkType::two_infinity();
    return SharkType::finite(std::stol(s));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "invariant laminations, dendrite models, and tree-map dynamics";

    m.def(
        "check_spec",
        [](const std::string& spec, int depth, int precision) {
            try {
                AxiomReport rep = check_axioms(build_from_text(spec, depth, precision));
                return py::make_tuple(rep.passed(), rep.str());
            } catch (const LinkedGenerators& e) {
                return py::make_tuple(false, std::string(e.what()));
            }
        },
        py::arg("spec"), py::arg("depth") = -1, py::arg("precision") = 20);

    m.def(
        "build_artifacts",
        [](const std::string& spec, int depth, int precision) {
            DendriteApprox D = build_dendrite(build_from_text(spec, depth, precision));
            py::dict out;
            out["classes"] = D.vertex_count();
            out["edges"] = D.edges().size();
            out["saturated"] = D.saturated();
            out["lamination"] = write_lamination(D.lamination());
            out["tree"] = write_tree(D);
            out["disk_svg"] = render_disk_svg(D.lamination());
            out["tree_svg"] = render_tree_svg(D);
            return out;
        },
        py::arg("spec"), py::arg("depth") = -1, py::arg("precision") = 20);

    m.def(
        "omega_targets",
        [](const std::string& spec, const std::string& seed, int depth, int budget,
           int precision) {
            Lamination L = build_from_text(spec, depth, precision);
            AngleClass c = seed_from_text(seed, precision);
            py::list out;
            for (auto& rec : omega_limit(L, c, budget, precision)) {
                py::dict row;
                row["target"] = rec.target.str();
                row["exact"] = rec.exact;
                row["witnesses"] = rec.witnesses.size();
                try {
                    LimitVerdict v = classify_limit_point(rec, precision);
                    row["type"] = std::string(limit_type_name(v.type));
                    row["at_budget"] = v.at_budget;
                } catch (const InsufficientWitnesses&) {
                    row["type"] = std::string("insufficient-witnesses");
                    row["at_budget"] = true;
                }
                out.append(row);
            }
            return out;
        },
        py::arg("spec"), py::arg("seed"), py::arg("depth") = -1, py::arg("budget") = 2000,
        py::arg("precision") = 20);

    m.def(
        "periodic_cutpoint_scan",
        [](const std::string& spec, int depth, int max_period, int precision) {
            Lamination L = build_from_text(spec, depth, precision);
            PeriodicCutpointScan scan = periodic_cutpoints(L, max_period);
            py::list stored;
            for (int id : scan.cutpoints)
                stored.append(py::make_tuple(L.info(id).cls.str(), L.info(id).period));
            py::list candidates;
            for (const auto& cyc : scan.candidates) {
                py::list angles;
                for (const auto& r : cyc) angles.append(r.str());
                candidates.append(angles);
            }
            py::dict out;
            out["cutpoints"] = stored;
            out["candidates"] = candidates;
            return out;
        },
        py::arg("spec"), py::arg("depth") = -1, py::arg("max_period") = 4,
        py::arg("precision") = 20);

    m.def(
        "verify_closure",
        [](const std::string& spec, const std::vector<std::string>& seeds, int depth,
           const std::vector<int>& p_list, int budget, int precision) {
            Lamination L = build_from_text(spec, depth, precision);
            std::vector<AngleClass> cs;
            for (const auto& s : seeds) cs.push_back(seed_from_text(s, precision));
            VerificationReport rep =
                verify_recurrence_theorems(L, cs, p_list, budget, precision);
            py::dict out;
            out["passed"] = rep.passed;
            out["report"] = rep.str();
            return out;
        },
        py::arg("spec"), py::arg("seeds"), py::arg("depth") = -1,
        py::arg("p_list") = std::vector<int>{4, 8, 12}, py::arg("budget") = 2000,
        py::arg("precision") = 20);

    m.def(
        "sharkovskiy_less",
        [](const std::string& a, const std::string& b) {
            return sharkovskiy_less(shark_from_text(a), shark_from_text(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "sharkovskiy_tail",
        [](const std::string& k, long upto) {
            SharkType s = shark_from_text(k);
            std::vector<long> out;
            for (long n = 1; n <= upto; ++n)
                if (sh_set_contains(s, n)) out.push_back(n);
            return out;
        },
        py::arg("k"), py::arg("upto"));

    m.def(
        "map_periods",
        [](const std::string& map_text, int max_period) {
            PeriodSet ps = exact_periods(parse_markov_map(map_text), max_period);
            py::dict out;
            out["realized"] = std::vector<long>(ps.realized.begin(), ps.realized.end());
            out["down_set"] = ps.down_set;
            out["classification"] =
                ps.classification ? ps.classification->str() : std::string("-");
            return out;
        },
        py::arg("map_text"), py::arg("max_period") = 10);

    m.def(
        "map_roundtrip",
        [](const std::string& map_text) { return write_markov_map(parse_markov_map(map_text)); },
        py::arg("map_text"));

    m.def(
        "center_check",
        [](const std::string& map_text, const std::vector<int>& p_list, int budget,
           int samples_per_edge) {
            MarkovTreeMap f = parse_markov_map(map_text);
            std::vector<TreePoint> samples;
            for (int v = 0; v < f.vertex_count(); ++v) samples.push_back(f.vertex_point(v));
            for (std::size_t e = 0; e < f.edges().size(); ++e)
                for (int i = 1; i <= samples_per_edge; ++i) {
                    mpq_class t = f.edges()[e].len * i;
                    t /= samples_per_edge + 1;
                    samples.push_back({(int)e, t});
                }
            CenterReport rep =
                center_vs_periodic_closure(f, samples, mpq_class(1, 256), p_list, budget);
            py::dict out;
            out["passed"] = rep.passed;
            out["report"] = rep.str();
            return out;
        },
        py::arg("map_text"), py::arg("p_list") = std::vector<int>{4, 8, 12},
        py::arg("budget") = 256, py::arg("samples_per_edge") = 32);

    m.def("tent_map_text", []() { return write_markov_map(tent_map()); });
    m.def(
        "stefan_map_text", [](int k) { return write_markov_map(stefan_map(k)); },
        py::arg("k"));
    m.def(
        "star_rotation_text", [](int legs) { return write_markov_map(star_rotation(legs)); },
        py::arg("legs"));

    m.def(
        "angle_str",
        [](const std::string& token) { return parse_angle(token).str(); },
        py::arg("token"));
}
