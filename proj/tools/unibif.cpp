// unibif: symbolic sequences, quotient-map diagrams, endpoint-pairing
// verification and separating paths from the command line.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unibif/diagram.hpp"
#include "unibif/io.hpp"
#include "unibif/planar.hpp"
#include "unibif/symbolic.hpp"
#include "unibif/verifier.hpp"

namespace fs = std::filesystem;
using namespace unibif;

namespace {

struct FamilyFlags {
    std::string family;
    std::string expr;
    std::string deriv;
    double M = 0;
    std::string sRange;
    std::string tRange;
    std::string config;
};

struct GridFlags {
    std::string grid;
    double delta = 0;
    double tolPer = 0;
    std::size_t threads = 1;
    std::string out = ".";
};

void add_family_flags(CLI::App* app, FamilyFlags& f) {
    app->add_option("--family", f.family, "quadratic-full, quadratic, or a family from --config");
    app->add_option("--expr", f.expr, "inline f(t, x), e.g. \"3.5*t - 1 - x^2\"");
    app->add_option("--deriv", f.deriv, "inline d/dx f(t, x); central differences when absent");
    app->add_option("--M", f.M, "bound M for --expr families");
    app->add_option("--s-range", f.sRange, "LO:HI parameter range of the raw quadratic (default 1.4:2.1)");
    app->add_option("--t-range", f.tRange, "LO:HI sub-interval of [0, 1] to sweep");
    app->add_option("--config", f.config, "key = value configuration file");
}

void add_grid_flags(CLI::App* app, GridFlags& g) {
    app->add_option("--grid", g.grid, "cell counts NTxNX");
    app->add_option("--delta", g.delta, "division threshold for even periods");
    app->add_option("--tol-per", g.tolPer, "periodicity tolerance");
    app->add_option("--threads", g.threads, "worker threads for field sampling")->check(CLI::PositiveNumber);
    app->add_option("--out", g.out, "output directory");
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw ParseError("range must look like LO:HI", 0);
    try {
        return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
    } catch (const std::logic_error&) {
        throw ParseError("range must look like LO:HI", 0);
    }
}

RunConfig make_config(const FamilyFlags& f, const GridFlags& g, const std::string& n) {
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw std::runtime_error("cannot open config " + f.config);
        apply_config(cfg, in);
    }
    if (!f.family.empty()) cfg.family = f.family;
    if (!f.expr.empty()) {
        if (!(f.M > 0)) throw std::invalid_argument("--expr needs a positive --M");
        cfg.inlineFamily = FamilyDefinition{f.expr, f.deriv.empty() ? std::nullopt : std::optional(f.deriv), f.M};
    }
    if (!f.sRange.empty()) std::tie(cfg.sLo, cfg.sHi) = parse_range(f.sRange);
    if (!n.empty()) std::tie(cfg.nMin, cfg.nMax) = parse_n_range(n);
    if (!g.grid.empty()) {
        auto [a, b] = parse_grid(g.grid);
        cfg.nt = a;
        cfg.nx = b;
    }
    if (g.delta != 0) cfg.delta = g.delta;
    if (g.tolPer != 0) cfg.tolPer = g.tolPer;
    cfg.threads = g.threads;
    if (g.out != ".") cfg.out = g.out;
    cfg.validate();
    return cfg;
}

Family family_of(const RunConfig& cfg, const FamilyFlags& f) {
    Family F = resolve_family(cfg);
    if (!f.tRange.empty()) {
        auto [lo, hi] = parse_range(f.tRange);
        F = restrict_parameter(F, lo, hi);
    }
    return F;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

const char* ordering_name(std::strong_ordering o) {
    if (o == std::strong_ordering::less) return "Less";
    if (o == std::strong_ordering::greater) return "Greater";
    return "Equal";
}

int run_seq(const std::string& op, const std::vector<std::string>& args) {
    auto need = [&](std::size_t k) {
        if (args.size() != k) throw std::invalid_argument("seq " + op + " takes " + std::to_string(k) + " argument(s)");
    };
    auto count = [&](const std::string& s) {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size() || v < 1) throw ParseError("expected a positive count", used);
        return static_cast<std::size_t>(v);
    };
    if (op == "order") {
        need(2);
        const bool finite = args[0].find('C') != std::string::npos || args[1].find('C') != std::string::npos;
        if (finite) std::cout << ordering_name(compare(FiniteItinerary::parse(args[0]), FiniteItinerary::parse(args[1])));
        else std::cout << ordering_name(compare(PeriodicSequence::parse(args[0]), PeriodicSequence::parse(args[1])));
        std::cout << '\n';
    } else if (op == "mu") {
        need(1);
        std::cout << mu(PeriodicSequence::parse(args[0])).str() << '\n';
    } else if (op == "nu") {
        need(1);
        std::cout << nu(PeriodicSequence::parse(args[0])).str() << '\n';
    } else if (op == "shuffle") {
        need(1);
        std::cout << shuffle_of(PeriodicSequence::parse(args[0])).str() << '\n';
    } else if (op == "enumerate") {
        need(1);
        for (const auto& a : enumerate_min_period_orbits(count(args[0]))) std::cout << a.str() << '\n';
    } else if (op == "match") {
        need(1);
        const auto pairs = symbolic_matching(count(args[0]));
        for (const auto& p : pairs) std::cout << p.first.str() << ' ' << p.second.str() << '\n';
        std::cout << pairs.size() << " pairs\n";
    } else {
        throw std::invalid_argument("unknown seq operation '" + op + "'");
    }
    return 0;
}

int run_diagram(const FamilyFlags& ff, const GridFlags& gf, const std::string& n) {
    const RunConfig cfg = make_config(ff, gf, n);
    if (cfg.nMin != cfg.nMax) throw std::invalid_argument("diagram takes a single period");
    const Family F = family_of(cfg, ff);
    const GridSpec spec = GridSpec::for_family(F, cfg.nt.value_or(2048), cfg.nx.value_or(2048), cfg.delta);
    DiagramOptions opt;
    opt.threads = cfg.threads;
    opt.refine.tolPer = cfg.tolPer;
    const Diagram d = build_diagram(F, cfg.nMin, spec, opt);

    const fs::path out(cfg.out);
    fs::create_directories(out);
    {
        std::ofstream csv(out / "field.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write field.csv");
        write_field_csv(csv, sample_field(F, cfg.nMin, spec, cfg.threads));
    }
    std::ostringstream zc;
    write_zero_cells(zc, d.cells);
    write_file(out / "zero_cells.txt", zc.str());
    const DiagramDocument doc{F.name(), cfg.nMin, spec, d.components};
    write_file(out / "components.json", to_json(doc).dump(1) + "\n");
    std::ostringstream svg;
    write_svg(svg, doc);
    write_file(out / "diagram.svg", svg.str());

    std::size_t hits = 0;
    for (const auto& c : d.components) hits += c.t1Hits.size();
    std::cout << "components " << d.components.size() << ", t=1 hits " << hits << ", zero cells "
              << d.cells.cell_count() << '\n';
    for (const auto& g : d.degenerate)
        std::cout << "anomaly tangency: t=1 cells [" << g.run.c0 << ", " << g.run.c1 << ")\n";
    return 0;
}

int run_verify(const FamilyFlags& ff, const GridFlags& gf, const std::string& n) {
    const RunConfig cfg = make_config(ff, gf, n.empty() ? "1..8" : n);
    const Family F = family_of(cfg, ff);
    const fs::path out(cfg.out);
    fs::create_directories(out);
    bool all = true;
    for (int k = cfg.nMin; k <= cfg.nMax; ++k) {
        VerifyOptions opt;
        opt.threads = cfg.threads;
        opt.refine.tolPer = cfg.tolPer;
        if (cfg.nt) opt.grid = GridSpec::for_family(F, *cfg.nt, *cfg.nx, cfg.delta);
        else if (cfg.delta) {
            GridSpec g = default_verification_grid(F, k);
            g.delta = cfg.delta;
            opt.grid = g;
        }
        const VerificationReport rep = verify_theorem(F, k, opt);
        write_file(out / ("report_n" + std::to_string(k) + ".json"), to_json(rep).dump(1) + "\n");
        write_summary(std::cout, rep);
        if (!rep.pass()) {
            all = false;
            try {
                require_pass(rep);
            } catch (const ResolutionInsufficient& e) {
                std::cerr << "ResolutionInsufficient: " << e.what() << '\n';
            }
        }
    }
    return all ? 0 : 1;
}

int run_path(const std::string& maskFile, int component, int p0, const std::string& mode, bool chord,
             const std::string& outDir) {
    std::ifstream in(maskFile);
    if (!in) throw std::runtime_error("cannot open mask " + maskFile);
    std::stringstream ss;
    ss << in.rdbuf();
    const PixelMask mask = PixelMask::parse(ss.str());
    const MaskLabels labels = label_mask(mask);
    const fs::path out(outDir);
    fs::create_directories(out);
    try {
        json j;
        std::vector<Cell> cells;
        if (chord) {
            // contact: boundary cell of the component in row p0, or its first boundary cell
            const DiskGeometry disk{mask.width() / 2};
            std::optional<Cell> contact;
            if (component < 0 || component >= static_cast<int>(labels.components.size()))
                throw std::invalid_argument("unknown component id " + std::to_string(component));
            for (Cell c : labels.components[static_cast<std::size_t>(component)])
                if (disk.on_boundary(c) && (p0 < 0 || c.row == p0)) {
                    contact = c;
                    break;
                }
            if (!contact) throw std::invalid_argument("component does not meet the disk boundary");
            const ChordResult r = separating_chord(mask, component, *contact);
            j = to_json(r.path);
            j["interior"] = r.interior;
            cells = r.path.cells;
        } else {
            const Cell p{p0, mask.width() - 1};
            if (component < 0 && mask.occupied(p)) component = labels.id[mask.index(p)];
            const PathResult r =
                separating_path(mask, component, p, mode == "doubled" ? SearchMode::Doubled : SearchMode::Direct);
            j = to_json(r);
            cells = r.cells;
        }
        write_file(out / "path.json", j.dump(1) + "\n");
        write_file(out / "overlay.txt", overlay(mask, cells));
        std::cout << "path of " << cells.size() << " cells\n";
        return 0;
    } catch (const NoPath& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unibif: bifurcation diagrams of unimodal families and their symbolic endpoint pairing"};
    app.require_subcommand(1);

    std::string seqOp;
    std::vector<std::string> seqArgs;
    auto* seq = app.add_subcommand("seq", "symbolic operations: order, mu, nu, shuffle, enumerate, match");
    seq->add_option("op", seqOp, "operation")->required()->check(
        CLI::IsMember({"order", "mu", "nu", "shuffle", "enumerate", "match"}));
    seq->add_option("args", seqArgs, "sequences (blocks over R/L, e.g. RLRRLL) or a period");

    FamilyFlags dFam, vFam;
    GridFlags dGrid, vGrid;
    std::string dN, vN;
    auto* diagram = app.add_subcommand("diagram", "sample G_n and write field CSV, zero cells, components JSON and SVG");
    add_family_flags(diagram, dFam);
    add_grid_flags(diagram, dGrid);
    diagram->add_option("--n", dN, "period m of G_m")->required();

    auto* verify = app.add_subcommand("verify", "check the endpoint pairing for a range of periods");
    add_family_flags(verify, vFam);
    add_grid_flags(verify, vGrid);
    verify->add_option("--n", vN, "period or range A..B (default 1..8)");

    std::string maskFile, mode = "direct", pOut = ".";
    int component = -1, p0 = -1;
    bool chord = false;
    auto* path = app.add_subcommand("path", "separating path for a component of a text raster");
    path->add_option("mask", maskFile, "text raster, '#' occupied and '.' free")->required();
    path->add_option("--component", component, "component id (row-major order of first cell)");
    path->add_option("--p0", p0, "row of the contact cell on the right edge (or disk boundary row)");
    path->add_option("--mode", mode, "direct or doubled")->check(CLI::IsMember({"direct", "doubled"}));
    path->add_flag("--chord", chord, "treat the raster as a disk and search a separating chord");
    path->add_option("--out", pOut, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*seq) return run_seq(seqOp, seqArgs);
        if (*diagram) return run_diagram(dFam, dGrid, dN);
        if (*verify) {
            if (vFam.family.empty() && vFam.expr.empty() && vFam.config.empty()) {
                std::cerr << "usage error: verify needs --family, --expr or --config\n";
                return 2;
            }
            return run_verify(vFam, vGrid, vN);
        }
        if (*path) {
            if (!chord && p0 < 0) {
                std::cerr << "usage error: path needs --p0\n";
                return 2;
            }
            return run_path(maskFile, component, p0, mode, chord, pOut);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionFailed& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
