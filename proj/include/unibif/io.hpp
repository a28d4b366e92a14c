#pragma once

/**
 * @file io.hpp
 * @brief Emitters and readers: field CSV, zero-cell listings, component and
 *        report JSON, SVG diagrams, path JSON, and key=value run configs.
 *
 * Floating point text uses 17 significant digits ("%.17g") in CSV and SVG.
 * JSON numbers use the serializer's shortest round-trip form, so re-reading
 * a file reproduces the in-memory doubles exactly.
 */

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "unibif/components.hpp"
#include "unibif/family.hpp"
#include "unibif/planar.hpp"
#include "unibif/quotient.hpp"
#include "unibif/verifier.hpp"

namespace unibif {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- CSV and zero-cell listing ------------------------------------------

inline void write_field_csv(std::ostream& os, const ScalarField& f) {
    os << "t,x,value\r\n";
    std::string line;
    for (int i = 0; i <= f.spec.nt; ++i) {
        const std::string t = format_double(f.spec.t_at(i));
        for (int j = 0; j <= f.spec.nx; ++j) {
            line = t;
            line += ',';
            line += format_double(f.spec.x_at(j));
            line += ',';
            line += format_double(f.at(i, j));
            line += "\r\n";
            os << line;
        }
    }
}

/// "nt nx" header, then one "row c0 c1" line per run of cells [c0, c1).
inline void write_zero_cells(std::ostream& os, const ZeroCellSet& z) {
    os << z.nt << ' ' << z.nx << '\n';
    for (const auto& r : z.runs) os << r.row << ' ' << r.c0 << ' ' << r.c1 << '\n';
}

inline ZeroCellSet read_zero_cells(std::istream& is) {
    ZeroCellSet z;
    if (!(is >> z.nt >> z.nx)) throw std::runtime_error("zero-cell listing: missing header");
    CellRun r;
    while (is >> r.row >> r.c0 >> r.c1) {
        if (r.c0 < 0 || r.c1 > z.nx || r.c0 >= r.c1 || r.row < 0 || r.row >= z.nt)
            throw std::runtime_error("zero-cell listing: run out of range");
        z.runs.push_back(r);
    }
    if (!is.eof()) throw std::runtime_error("zero-cell listing: malformed line");
    return z;
}

// ---- JSON ------------------------------------------------------------------

inline json to_json(const GridSpec& g) {
    json j = {{"nt", g.nt}, {"nx", g.nx}, {"xMin", g.xMin}, {"xMax", g.xMax}};
    j["delta"] = g.delta ? json(*g.delta) : json(nullptr);
    return j;
}

inline GridSpec grid_from_json(const json& j) {
    GridSpec g{j.at("nt").get<int>(), j.at("nx").get<int>(), j.at("xMin").get<double>(), j.at("xMax").get<double>(),
               std::nullopt};
    if (!j.at("delta").is_null()) g.delta = j.at("delta").get<double>();
    return g;
}

inline json to_json(const T1Hit& h) {
    return {{"x", h.x}, {"minimalPeriod", h.minimalPeriod}, {"itinerary", h.itinerary.str()}};
}

inline T1Hit hit_from_json(const json& j) {
    return {j.at("x").get<double>(), j.at("minimalPeriod").get<int>(),
            FiniteItinerary::parse(j.at("itinerary").get<std::string>())};
}

inline json to_json(const HalfPeriodWitness& w) { return {{"t", w.t}, {"x", w.x}, {"derivative", w.derivative}}; }

inline HalfPeriodWitness witness_from_json(const json& j) {
    return {j.at("t").get<double>(), j.at("x").get<double>(), j.at("derivative").get<double>()};
}

inline json bbox_json(const BoundingBox& b, const GridSpec& g) {
    return {{"rowMin", b.rowMin}, {"rowMax", b.rowMax}, {"colMin", b.colMin}, {"colMax", b.colMax},
            {"tMin", g.t_at(b.rowMin)}, {"tMax", g.t_at(b.rowMax + 1)},
            {"xMin", g.x_at(b.colMin)}, {"xMax", g.x_at(b.colMax + 1)}};
}

inline json to_json(const ComponentRecord& c, const GridSpec& g) {
    json cells = json::array();
    for (const auto& r : c.cells) cells.push_back({r.row, r.c0, r.c1});
    json hits = json::array();
    for (const auto& h : c.t1Hits) hits.push_back(to_json(h));
    json wit = json::array();
    for (const auto& w : c.halfPeriodWitnesses) wit.push_back(to_json(w));
    return {{"id", c.id}, {"bbox", bbox_json(c.bounds(), g)}, {"period", c.period},
            {"t1Hits", hits}, {"halfPeriodWitnesses", wit}, {"cells", cells}};
}

inline ComponentRecord component_from_json(const json& j) {
    ComponentRecord c;
    c.id = j.at("id").get<int>();
    c.period = j.at("period").get<int>();
    for (const auto& r : j.at("cells")) c.cells.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>()});
    for (const auto& h : j.at("t1Hits")) c.t1Hits.push_back(hit_from_json(h));
    for (const auto& w : j.at("halfPeriodWitnesses")) c.halfPeriodWitnesses.push_back(witness_from_json(w));
    return c;
}

struct DiagramDocument {
    std::string family;
    int m = 1;
    GridSpec grid;
    std::vector<ComponentRecord> components;
    friend bool operator==(const DiagramDocument&, const DiagramDocument&) = default;
};

inline json to_json(const DiagramDocument& d) {
    json comps = json::array();
    for (const auto& c : d.components) comps.push_back(to_json(c, d.grid));
    return {{"family", d.family}, {"m", d.m}, {"grid", to_json(d.grid)}, {"components", comps}};
}

inline DiagramDocument diagram_from_json(const json& j) {
    DiagramDocument d;
    d.family = j.at("family").get<std::string>();
    d.m = j.at("m").get<int>();
    d.grid = grid_from_json(j.at("grid"));
    for (const auto& c : j.at("components")) d.components.push_back(component_from_json(c));
    return d;
}

inline json pair_json(const SequencePair& p) { return json::array({p.first.str(), p.second.str()}); }

inline json to_json(const VerificationReport& r) {
    json comps = json::array();
    for (const auto& c : r.components) {
        json hits = json::array();
        for (const auto& h : c.t1Hits) hits.push_back(to_json(h));
        json wit = json::array();
        for (const auto& w : c.halfPeriodWitnesses) wit.push_back(to_json(w));
        comps.push_back({{"id", c.id}, {"bbox", bbox_json(c.bounds, r.grid)}, {"cellCount", c.cellCount},
                         {"period", c.period}, {"t1Hits", hits}, {"halfPeriodWitnesses", wit}});
    }
    json num = json::array(), sym = json::array(), an = json::array();
    for (const auto& p : r.numericMatching) num.push_back(pair_json(p));
    for (const auto& p : r.symbolicMatching) sym.push_back(pair_json(p));
    for (const auto& a : r.anomalies)
        an.push_back({{"kind", to_string(a.kind)}, {"component", a.component}, {"detail", a.detail}});
    return {{"family", r.familyName},
            {"n", r.n},
            {"grid", to_json(r.grid)},
            {"refinements", r.refinements},
            {"componentCount", r.componentCount},
            {"components", comps},
            {"numericMatching", num},
            {"symbolicMatching", sym},
            {"anomalies", an},
            {"verdict", r.pass() ? "pass" : "fail"}};
}

inline json to_json(const PathResult& p) {
    json cells = json::array();
    for (Cell c : p.cells) cells.push_back({c.row, c.col});
    return {{"first", {p.first.row, p.first.col}}, {"second", {p.second.row, p.second.col}},
            {"length", p.cells.size()}, {"cells", cells}};
}

// ---- summary table -------------------------------------------------------

inline void write_summary(std::ostream& os, const VerificationReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "family %s  n=%d  grid %dx%d  components %zu  refinements %d\n",
                  r.familyName.c_str(), r.n, r.grid.nt, r.grid.nx, r.componentCount, r.refinements);
    os << buf;
    os << "  pairs (numeric/symbolic): " << r.numericMatching.size() << '/' << r.symbolicMatching.size() << '\n';
    for (const auto& p : r.numericMatching) os << "    " << p.first.str() << "  " << p.second.str() << '\n';
    for (const auto& a : r.anomalies)
        os << "  anomaly " << to_string(a.kind) << " (component " << a.component << "): " << a.detail << '\n';
    os << "  verdict: " << (r.pass() ? "pass" : "fail") << '\n';
}

// ---- SVG -----------------------------------------------------------------

/// One unit per cell; t to the right, x upwards.  Zero-cell runs are rects
/// coloured by component id; t = 1 hits are crosses on the right edge.
inline void write_svg(std::ostream& os, const DiagramDocument& d) {
    static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
    const GridSpec& g = d.grid;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1024\" height=\"1024\" viewBox=\"0 0 "
       << g.nt + 8 << ' ' << g.nx << "\" preserveAspectRatio=\"none\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << g.nt << "\" height=\"" << g.nx << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
    for (const auto& c : d.components) {
        os << "<g id=\"c" << c.id << "\" fill=\"" << kPalette[static_cast<std::size_t>(c.id) % 10] << "\">\n";
        for (const auto& r : c.cells)
            os << "<rect x=\"" << r.row << "\" y=\"" << g.nx - r.c1 << "\" width=\"1\" height=\"" << r.length() << "\"/>\n";
        os << "</g>\n";
    }
    const double s = std::max(2.0, g.nx / 256.0);
    for (const auto& c : d.components)
        for (const auto& h : c.t1Hits) {
            const double y = (g.xMax - h.x) / g.dx();
            const double x = g.nt;
            os << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"" << format_double(s / 4) << "\" points=\""
               << format_double(x - s) << ',' << format_double(y - s) << ' ' << format_double(x + s) << ','
               << format_double(y + s) << ' ' << format_double(x) << ',' << format_double(y) << ' '
               << format_double(x - s) << ',' << format_double(y + s) << ' ' << format_double(x + s) << ','
               << format_double(y - s) << "\"/>\n";
        }
    os << "</svg>\n";
}

// ---- run configuration -----------------------------------------------------

struct FamilyDefinition {
    std::string expr;
    std::optional<std::string> deriv;
    double M = 0;
};

struct RunConfig {
    std::string command;
    std::string family;
    std::optional<FamilyDefinition> inlineFamily;
    std::map<std::string, FamilyDefinition> families;  // from config files
    double sLo = 1.4, sHi = 2.1;                         // range of the raw quadratic
    int nMin = 1, nMax = 1;
    std::optional<int> nt, nx;
    std::optional<double> delta, tolPer;
    std::string out = ".";
    std::size_t threads = 1;

    void validate() const {
        if (nMin < 1 || nMax < nMin) throw std::invalid_argument("n must satisfy 1 <= nMin <= nMax");
        if (delta && !(*delta > 0)) throw std::invalid_argument("delta must be positive");
        if (tolPer && !(*tolPer > 0)) throw std::invalid_argument("tol-per must be positive");
        if ((nt && *nt < 16) || (nx && *nx < 16)) throw std::invalid_argument("grid needs at least 16 cells per axis");
        if (threads < 1) throw std::invalid_argument("threads must be positive");
        if (!(sHi > sLo)) throw std::invalid_argument("empty parameter range");
    }
};

/// "N" or "A..B".
inline std::pair<int, int> parse_n_range(const std::string& s) {
    auto num = [&](const std::string& v) {
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(v, &used);
        } catch (const std::exception&) {
            throw ParseError("expected an integer in n range '" + s + "'", 0);
        }
        if (used != v.size()) throw ParseError("expected an integer in n range '" + s + "'", used);
        return k;
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int k = num(s);
        return {k, k};
    }
    return {num(s.substr(0, dots)), num(s.substr(dots + 2))};
}

/// "NTxNX", e.g. 2048x2048.
inline std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw ParseError("grid must look like NTxNX", 0);
    try {
        std::size_t a = 0, b = 0;
        const int nt = std::stoi(s.substr(0, x), &a);
        const int nx = std::stoi(s.substr(x + 1), &b);
        if (a != x || b != s.size() - x - 1) throw ParseError("grid must look like NTxNX", 0);
        return {nt, nx};
    } catch (const std::logic_error&) {
        throw ParseError("grid must look like NTxNX", 0);
    }
}

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Applies key = value lines (see docs/config.md) on top of `cfg`.
inline void apply_config(RunConfig& cfg, std::istream& is) {
    std::string line;
    std::size_t lineNo = 0;
    auto number = [&](const std::string& v, std::size_t at) {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw ParseError("trailing characters after number", at);
            return d;
        } catch (const std::logic_error&) {
            throw ParseError("expected a number on line " + std::to_string(lineNo), at);
        }
    };
    while (std::getline(is, line)) {
        ++lineNo;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value on line " + std::to_string(lineNo), 0);
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.rfind("family.", 0) == 0) {
            const auto dot = key.rfind('.');
            if (dot <= 7) throw ParseError("family keys look like family.NAME.FIELD (line " + std::to_string(lineNo) + ")", 0);
            const std::string name = key.substr(7, dot - 7);
            const std::string field = key.substr(dot + 1);
            auto& def = cfg.families[name];
            if (field == "expr") def.expr = val;
            else if (field == "deriv") def.deriv = val;
            else if (field == "M") def.M = number(val, eq + 1);
            else throw ParseError("unknown family field '" + field + "' on line " + std::to_string(lineNo), 0);
        } else if (key == "command") cfg.command = val;
        else if (key == "family") cfg.family = val;
        else if (key == "n") std::tie(cfg.nMin, cfg.nMax) = parse_n_range(val);
        else if (key == "grid") {
            auto [a, b] = parse_grid(val);
            cfg.nt = a;
            cfg.nx = b;
        } else if (key == "delta") cfg.delta = number(val, eq + 1);
        else if (key == "tol_per") cfg.tolPer = number(val, eq + 1);
        else if (key == "out") cfg.out = val;
        else if (key == "threads") cfg.threads = static_cast<std::size_t>(number(val, eq + 1));
        else if (key == "s_range") {
            std::istringstream ss(val);
            if (!(ss >> cfg.sLo >> cfg.sHi)) throw ParseError("s_range needs two numbers", eq + 1);
        } else throw ParseError("unknown key '" + key + "' on line " + std::to_string(lineNo), 0);
    }
}

/// Built-ins "quadratic-full" and "quadratic" (q_s on [sLo, sHi]), inline
/// definitions, and families from config files.
inline Family resolve_family(const RunConfig& cfg) {
    if (cfg.inlineFamily) {
        const auto& d = *cfg.inlineFamily;
        return Family::from_expression(cfg.family.empty() ? "inline" : cfg.family, d.expr,
                                       d.deriv ? std::optional<std::string_view>(*d.deriv) : std::nullopt, d.M);
    }
    if (cfg.family.empty()) throw std::invalid_argument("no family given");
    if (cfg.family == "quadratic-full") return reparametrized_quadratic();
    if (cfg.family == "quadratic") return quadratic(cfg.sLo, cfg.sHi);
    const auto it = cfg.families.find(cfg.family);
    if (it == cfg.families.end()) throw std::invalid_argument("unknown family '" + cfg.family + "'");
    const auto& d = it->second;
    if (d.expr.empty()) throw std::invalid_argument("family '" + cfg.family + "' has no expression");
    return Family::from_expression(cfg.family, d.expr,
                                   d.deriv ? std::optional<std::string_view>(*d.deriv) : std::nullopt, d.M);
}

}  // namespace unibif
