#include <CLI11.hpp>

#include "lamdyn/io.hpp"
#include "lamdyn/svg.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace lamdyn;

namespace {

struct Options {
    std::string input;
    int depth = -1;  // -1: use the value from the spec file
    int budget = 2000;
    int precision = 20;
    int max_period = 0;  // 0: per-command default
    std::vector<std::string> seeds;
    std::string out;
    bool budget_set = false;
};

// commands that take a period list use thirds of the requested maximum
std::vector<int> period_bounds(int max_period) {
    if (max_period <= 0) return {4, 8, 12};
    std::vector<int> ps;
    for (int p : {max_period / 3, 2 * max_period / 3, max_period})
        if (p >= 1 && (ps.empty() || p > ps.back())) ps.push_back(p);
    return ps;
}

void config_header(std::ostream& os, const std::string& cmd, const Options& o, int depth) {
    os << "# lamdyn " << cmd << "\n";
    os << "# config input=" << o.input << " depth=" << depth << " budget=" << o.budget
       << " precision=" << o.precision << " max-period=" << o.max_period << " seed=";
    if (o.seeds.empty()) {
        os << "-";
    } else {
        for (std::size_t i = 0; i < o.seeds.size(); ++i) {
            if (i) os << ',';
            os << o.seeds[i];
        }
    }
    os << " out=" << (o.out.empty() ? "-" : o.out) << "\n";
}

// a seed class on the command line is angles joined by '+'
AngleClass parse_seed_class(const std::string& s, int precision) {
    std::vector<Angle> angles;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t plus = s.find('+', pos);
        std::string tok = s.substr(pos, plus == std::string::npos ? std::string::npos
                                                                  : plus - pos);
        if (tok.empty()) throw std::runtime_error("empty angle in seed '" + s + "'");
        try {
            angles.push_back(parse_angle(tok));
        } catch (const std::exception& e) {
            throw std::runtime_error("bad angle '" + tok + "' in seed: " + e.what());
        }
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    bool exact = true;
    for (const auto& a : angles)
        if (!a.exact()) exact = false;
    return exact ? AngleClass::of_exact(std::move(angles))
                 : AngleClass::with_precision(std::move(angles), precision);
}

std::vector<AngleClass> resolve_seeds(const Options& o, const LaminationSpecFile& spec) {
    if (o.seeds.empty()) return spec_generator_classes(spec, o.precision);
    std::vector<AngleClass> out;
    for (const auto& s : o.seeds) out.push_back(parse_seed_class(s, o.precision));
    return out;
}

void emit(const std::string& text, const Options& o, const std::string& name) {
    std::cout << text;
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        write_file(o.out + "/" + name, text);
    }
}

struct SpecRun {
    LaminationSpecFile spec;
    int depth;
    Lamination lam;
};

SpecRun build_from_spec(const Options& o) {
    LaminationSpecFile spec = parse_lamination_spec(read_file(o.input));
    int depth = o.depth >= 0 ? o.depth : spec.depth;
    Lamination L =
        pullback_closure(spec.degree, spec_generator_classes(spec, o.precision), depth);
    return {std::move(spec), depth, std::move(L)};
}

int cmd_validate(const Options& o) {
    LaminationSpecFile spec = parse_lamination_spec(read_file(o.input));
    int depth = o.depth >= 0 ? o.depth : spec.depth;
    std::ostringstream os;
    config_header(os, "validate", o, depth);
    try {
        Lamination L =
            pullback_closure(spec.degree, spec_generator_classes(spec, o.precision), depth);
        AxiomReport rep = check_axioms(L);
        os << "classes = " << L.size() << "\n" << rep.str();
        emit(os.str(), o, "validate.txt");
        return rep.passed() ? 0 : 1;
    } catch (const LinkedGenerators& e) {
        os << "axiom-check: E2 violation\n" << e.what() << "\nresult: FAIL\n";
        emit(os.str(), o, "validate.txt");
        return 1;
    }
}

int cmd_build(const Options& o) {
    SpecRun run = build_from_spec(o);
    DendriteApprox D = build_dendrite(std::move(run.lam));
    std::string dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    std::ostringstream os;
    config_header(os, "build", o, run.depth);
    os << "classes = " << D.vertex_count() << "\n";
    os << "edges = " << D.edges().size() << "\n";
    os << "saturated = " << (D.saturated() ? "yes" : "no") << "\n";
    for (auto [name, text] :
         {std::pair<std::string, std::string>{"lamination.txt", write_lamination(D.lamination())},
          {"tree.txt", write_tree(D)},
          {"disk.svg", render_disk_svg(D.lamination())},
          {"tree.svg", render_tree_svg(D)}}) {
        write_file(dir + "/" + name, text);
        os << "wrote " << dir << "/" << name << "\n";
    }
    std::cout << os.str();
    return 0;
}

int cmd_orbit(const Options& o) {
    SpecRun run = build_from_spec(o);
    std::vector<AngleClass> seeds = resolve_seeds(o, run.spec);
    std::ostringstream os;
    config_header(os, "orbit", o, run.depth);
    int total = 0;
    for (const auto& seed : seeds) {
        os << "seed " << seed.str() << "\n";
        for (const auto& rec : omega_limit(run.lam, seed, o.budget, o.precision)) {
            os << "  target " << rec.target.str()
               << " kind=" << (rec.exact ? "exact" : "at-budget")
               << " witnesses=" << rec.witnesses.size();
            if (rec.exact) os << " preperiod=" << rec.seed_preperiod;
            os << "\n";
            ++total;
        }
    }
    os << "targets = " << total << "\n";
    emit(os.str(), o, "orbit.txt");
    return 0;
}

int cmd_classify(const Options& o) {
    SpecRun run = build_from_spec(o);
    std::vector<AngleClass> seeds = resolve_seeds(o, run.spec);
    std::ostringstream os;
    config_header(os, "classify", o, run.depth);
    for (const auto& seed : seeds) {
        os << "seed " << seed.str() << "\n";
        auto records = omega_limit(run.lam, seed, o.budget, o.precision);
        for (auto& rec : records) {
            os << "  target " << rec.target.str();
            try {
                LimitVerdict v = classify_limit_point(rec, o.precision);
                os << " type=" << limit_type_name(v.type)
                   << " at-budget=" << (v.at_budget ? "yes" : "no");
                if (!rec.side_edge.empty()) {
                    os << " side=";
                    for (std::size_t i = 0; i < rec.side_edge.size(); ++i)
                        os << (i ? "+" : "") << rec.side_edge[i].str();
                }
            } catch (const InsufficientWitnesses& e) {
                os << " " << e.what();
            }
            os << "\n";
        }
    }
    emit(os.str(), o, "classify.txt");
    return 0;
}

int cmd_periodic_cutpoints(const Options& o) {
    SpecRun run = build_from_spec(o);
    int max_period = o.max_period > 0 ? o.max_period : 4;
    std::ostringstream os;
    config_header(os, "periodic-cutpoints", o, run.depth);
    PeriodicCutpointScan scan = periodic_cutpoints(run.lam, max_period);
    for (int id : scan.cutpoints) {
        const ClassInfo& ci = run.lam.info(id);
        os << "cutpoint " << ci.cls.str() << " period=" << ci.period << "\n";
    }
    for (const auto& cyc : scan.candidates) {
        os << "candidate-beyond-depth";
        for (const auto& r : cyc) os << " " << r.str();
        os << "\n";
    }
    os << "stored = " << scan.cutpoints.size() << "\n";
    os << "candidates = " << scan.candidates.size() << "\n";
    emit(os.str(), o, "periodic-cutpoints.txt");
    return 0;
}

int verify_closure(const Options& o, bool recurrent_only) {
    SpecRun run = build_from_spec(o);
    std::vector<AngleClass> seeds = resolve_seeds(o, run.spec);
    std::vector<std::string> skipped;
    if (o.seeds.empty()) {
        // keep only seeds the theorems speak about; explicit --seed values are
        // passed through so precondition failures surface
        std::vector<AngleClass> kept;
        for (const auto& s : seeds) {
            bool persistent = s.exact()
                                  ? is_persistent_cutpoint(s, run.lam.degree())
                                  : is_persistent_cutpoint_bounded(s, run.lam.degree(),
                                                                   o.budget, o.precision);
            bool ok = persistent;
            if (ok && recurrent_only && s.exact())
                ok = orbit_portrait(s, run.lam.degree()).first == 0;
            if (ok) kept.push_back(s);
            else skipped.push_back(s.str());
        }
        seeds = std::move(kept);
    }
    const char* name = recurrent_only ? "verify recdend" : "verify limdend";
    std::ostringstream os;
    config_header(os, name, o, run.depth);
    if (seeds.empty()) {
        os << "note: no usable seeds\nresult: PASS\n";
        emit(os.str(), o, recurrent_only ? "recdend.txt" : "limdend.txt");
        return 0;
    }
    VerificationReport rep = verify_recurrence_theorems(run.lam, seeds, period_bounds(o.max_period),
                                                        o.budget, o.precision);
    if (recurrent_only) rep.theorem = "recurrent-arc-closure";
    for (const auto& s : skipped) rep.notes.push_back("seed " + s + " skipped at precondition");
    os << rep.str();
    emit(os.str(), o, recurrent_only ? "recdend.txt" : "limdend.txt");
    if (rep.passed) return 0;
    // only an exactly-resolved orbit can witness a theorem violation; stream
    // rows fluctuate with the budget
    for (const auto& row : rep.rows)
        if (row.eventually_periodic)
            for (const auto& d : row.distances)
                if (!(d == Rational(0, 1))) return 1;
    return 0;
}

int verify_core(const Options& o) {
    SpecRun run = build_from_spec(o);
    DendriteApprox D = build_dendrite(std::move(run.lam));
    const Lamination& L = D.lamination();
    std::ostringstream os;
    config_header(os, "verify core", o, run.depth);
    CoreResult core = dynamical_core(D);
    bool exact_failure = false;
    if (core.no_critical_core) {
        os << "no-critical-core\n";
    } else {
        for (int id : core.vertices) os << "core " << L.info(id).cls.str() << "\n";
        os << "core-vertices = " << core.vertices.size() << "\n";

        std::set<int> in_core(core.vertices.begin(), core.vertices.end());
        for (int id : core.vertices) {
            int img = D.image_of(id);
            if (img == -1) {
                os << "note: FRONTIER image of " << L.info(id).cls.str()
                   << " is beyond depth\n";
            } else if (!in_core.count(img)) {
                os << "invariance violation: image of " << L.info(id).cls.str()
                   << " leaves the core\n";
                exact_failure = true;
            }
        }
        bool arc_ok = true;
        for (int u : core.vertices) {
            for (int v : core.vertices) {
                for (int w : D.arc_between(u, v))
                    if (!in_core.count(w)) {
                        os << "invariance violation: arc " << L.info(u).cls.str() << " .. "
                           << L.info(v).cls.str() << " leaves the core\n";
                        arc_ok = false;
                        exact_failure = true;
                        break;
                    }
                if (!arc_ok) break;
            }
            if (!arc_ok) break;
        }

        int frontier_notes = 0, absorbed_failures = 0;
        for (int v : absorption_failures(D, core.vertices)) {
            // an orbit that leaves the stored depth is a refusal, not a
            // counterexample; a stored cycle outside the core is exact
            bool hits_frontier = false;
            std::set<int> seen;
            int cur = v;
            while (cur != -1 && seen.insert(cur).second) cur = D.image_of(cur);
            if (cur == -1) hits_frontier = true;
            if (hits_frontier) {
                os << "note: FRONTIER orbit of " << L.info(v).cls.str()
                   << " leaves depth before absorption\n";
                ++frontier_notes;
            } else {
                os << "absorption failure: " << L.info(v).cls.str() << "\n";
                ++absorbed_failures;
                exact_failure = true;
            }
        }
        os << "absorption: frontier=" << frontier_notes << " failures=" << absorbed_failures
           << "\n";
    }
    for (const auto& n : core.notes) os << "note: " << n << "\n";
    os << "result: " << (exact_failure ? "FAIL" : "PASS") << "\n";
    emit(os.str(), o, "core.txt");
    return exact_failure ? 1 : 0;
}

int verify_sharkovskiy(const Options& o) {
    MarkovTreeMap f = parse_markov_map(read_file(o.input));
    int P = o.max_period > 0 ? o.max_period : 10;
    std::ostringstream os;
    config_header(os, "verify sharkovskiy", o, /*depth=*/0);
    bool interval = true;
    for (const auto& inc : f.adjacency())
        if (inc.size() > 2) interval = false;
    os << "map vertices=" << f.vertex_count() << " edges=" << f.edges().size()
       << " interval=" << (interval ? "yes" : "no") << "\n";
    PeriodSet ps = exact_periods(f, P);
    os << "realized =";
    for (long n : ps.realized) os << " " << n;
    os << "\n";
    os << "down-set = " << (ps.down_set ? "yes" : "no") << "\n";
    os << "classification = " << (ps.classification ? ps.classification->str() : "-") << "\n";
    bool fail = interval && !ps.down_set;
    os << "result: " << (fail ? "FAIL" : "PASS") << "\n";
    emit(os.str(), o, "sharkovskiy.txt");
    return fail ? 1 : 0;
}

int verify_center(const Options& o) {
    MarkovTreeMap f = parse_markov_map(read_file(o.input));
    std::vector<TreePoint> samples;
    for (int v = 0; v < f.vertex_count(); ++v) samples.push_back(f.vertex_point(v));
    for (std::size_t e = 0; e < f.edges().size(); ++e)
        for (int i = 1; i <= 32; ++i) {
            mpq_class t = f.edges()[e].len * i;
            t /= 33;
            samples.push_back({(int)e, t});
        }
    std::vector<int> p_list = period_bounds(o.max_period);
    int budget = o.budget_set ? o.budget : 256;
    std::ostringstream os;
    config_header(os, "verify center", o, /*depth=*/0);
    os << "map vertices=" << f.vertex_count() << " edges=" << f.edges().size() << "\n";
    CenterReport rep =
        center_vs_periodic_closure(f, samples, mpq_class(1, 256), p_list, budget);
    os << rep.str();
    emit(os.str(), o, "center.txt");
    return 0;
}

int cmd_render(const Options& o) {
    SpecRun run = build_from_spec(o);
    DendriteApprox D = build_dendrite(std::move(run.lam));
    std::string dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    std::ostringstream os;
    config_header(os, "render", o, run.depth);
    write_file(dir + "/disk.svg", render_disk_svg(D.lamination()));
    os << "wrote " << dir << "/disk.svg\n";
    write_file(dir + "/tree.svg", render_tree_svg(D));
    os << "wrote " << dir << "/tree.svg\n";
    std::cout << os.str();
    return 0;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("input", o.input, "input file")->required();
    sub->add_option("--depth", o.depth, "pullback depth (default: value in the spec file)");
    sub->add_option("--budget", o.budget, "iterate budget");
    sub->add_option("--precision", o.precision, "digit precision for stream angles");
    sub->add_option("--max-period", o.max_period, "largest period bound");
    sub->add_option("--seed", o.seeds, "seed class, angles joined by '+' (repeatable)");
    sub->add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariant laminations, dendrite models, and tree-map dynamics"};
    app.require_subcommand(1);
    Options o;

    CLI::App* validate = app.add_subcommand("validate", "axiom-check a lamination spec");
    CLI::App* build = app.add_subcommand("build", "build and export lamination and tree");
    CLI::App* orbit = app.add_subcommand("orbit", "omega-limit targets of seed orbits");
    CLI::App* classify = app.add_subcommand("classify", "arc vs non-separating verdicts");
    CLI::App* pcp = app.add_subcommand("periodic-cutpoints", "periodic cutpoint scan");
    CLI::App* verify = app.add_subcommand("verify", "theorem verification reports");
    verify->require_subcommand(1);
    CLI::App* limdend = verify->add_subcommand("limdend", "limit sets vs periodic cutpoints");
    CLI::App* recdend = verify->add_subcommand("recdend", "recurrent seeds vs periodic cutpoints");
    CLI::App* core = verify->add_subcommand("core", "dynamical core invariance and absorption");
    CLI::App* shark = verify->add_subcommand("sharkovskiy", "period forcing on a map file");
    CLI::App* center = verify->add_subcommand("center", "late orbits vs the periodic closure");
    CLI::App* render = app.add_subcommand("render", "disk and tree pictures");
    std::vector<CLI::App*> leaves = {validate, build,  orbit, classify, pcp,   limdend,
                                     recdend,  core,   shark, center,   render};
    for (CLI::App* sub : leaves) add_common(sub, o);

    CLI11_PARSE(app, argc, argv);
    for (CLI::App* sub : leaves)
        if (sub->parsed()) o.budget_set = sub->count("--budget") > 0;

    try {
        if (validate->parsed()) return cmd_validate(o);
        if (build->parsed()) return cmd_build(o);
        if (orbit->parsed()) return cmd_orbit(o);
        if (classify->parsed()) return cmd_classify(o);
        if (pcp->parsed()) return cmd_periodic_cutpoints(o);
        if (limdend->parsed()) return verify_closure(o, false);
        if (recdend->parsed()) return verify_closure(o, true);
        if (core->parsed()) return verify_core(o);
        if (shark->parsed()) return verify_sharkovskiy(o);
        if (center->parsed()) return verify_center(o);
        if (render->parsed()) return cmd_render(o);
    } catch (const LinkedGenerators& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Frontier& e) {
        std::cout << "note: " << e.what() << "\n";
        return 0;
    } catch (const UndecidedAtPrecision& e) {
        std::cout << "note: " << e.what() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
