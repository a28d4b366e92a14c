#pragma once

/**
 * @file components.hpp
 * @brief Periodic point components of a sampled G_m zero set: labeling,
 *        t = 1 endpoints, interior samples, half-period witnesses, and the
 *        leftmost (birth) parameter of a component.
 *
 * Zero cells are 8-connected; the complement is implicitly 4-connected.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "unibif/quotient.hpp"
#include "unibif/symbolic.hpp"
#include "unibif/unimodal.hpp"

namespace unibif {

class NotPeriodic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A refined zero of G_m at t = 1.
struct T1Hit {
    double x = 0;
    int minimalPeriod = 0;     // 0 when the point failed the periodicity check
    FiniteItinerary itinerary; // first m symbols of the orbit

    std::optional<PeriodicSequence> sequence() const {
        if (itinerary.empty() || itinerary.terminated_by_c()) return std::nullopt;
        return PeriodicSequence(std::vector<Symbol>(itinerary.word().begin(), itinerary.word().end()));
    }
    std::string itinerary_text() const {
        if (auto s = sequence()) return s->str();
        return itinerary.str();
    }
    friend bool operator==(const T1Hit&, const T1Hit&) = default;
};

/// A point of a component with minimal period m/2; there (f^{m/2})' = -1.
struct HalfPeriodWitness {
    double t = 0;
    double x = 0;
    double derivative = 0;  // (f_t^{m/2})'(x)
    friend bool operator==(const HalfPeriodWitness&, const HalfPeriodWitness&) = default;
};

struct RefinedPoint {
    double t = 0;
    double x = 0;
    int minimalPeriod = 0;
};

struct BoundingBox {
    int rowMin = 0, rowMax = 0, colMin = 0, colMax = 0;  // inclusive cell indices
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ComponentRecord {
    int id = 0;
    std::vector<CellRun> cells;
    int period = 0;
    std::vector<HalfPeriodWitness> halfPeriodWitnesses;
    std::vector<T1Hit> t1Hits;

    BoundingBox bounds() const {
        BoundingBox b{cells.front().row, cells.front().row, cells.front().c0, cells.front().c1 - 1};
        for (const auto& r : cells) {
            b.rowMin = std::min(b.rowMin, static_cast<int>(r.row));
            b.rowMax = std::max(b.rowMax, static_cast<int>(r.row));
            b.colMin = std::min(b.colMin, static_cast<int>(r.c0));
            b.colMax = std::max(b.colMax, static_cast<int>(r.c1) - 1);
        }
        return b;
    }
    std::size_t cell_count() const {
        std::size_t s = 0;
        for (const auto& r : cells) s += static_cast<std::size_t>(r.length());
        return s;
    }
    std::vector<CellRun> runs_in_row(int row) const {
        std::vector<CellRun> out;
        for (const auto& r : cells)
            if (r.row == row) out.push_back(r);
        return out;
    }
    friend bool operator==(const ComponentRecord&, const ComponentRecord&) = default;
};

namespace detail {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace detail

/// 8-connected components of the zero cells.  Ids follow the first run of
/// each component in row-major order.
inline std::vector<ComponentRecord> label_components(const ZeroCellSet& cells) {
    const auto& runs = cells.runs;
    detail::DisjointSet ds(runs.size());
    std::size_t prevBegin = 0, prevEnd = 0;
    std::size_t i = 0;
    while (i < runs.size()) {
        const int row = runs[i].row;
        std::size_t end = i;
        while (end < runs.size() && runs[end].row == row) ++end;
        if (prevEnd > prevBegin && runs[prevBegin].row == row - 1) {
            std::size_t p = prevBegin;
            for (std::size_t k = i; k < end; ++k) {
                while (p < prevEnd && runs[p].c1 < runs[k].c0) ++p;
                for (std::size_t q = p; q < prevEnd && runs[q].c0 <= runs[k].c1; ++q) ds.unite(k, q);
            }
        }
        prevBegin = i;
        prevEnd = end;
        i = end;
    }
    std::vector<int> idOf(runs.size(), -1);
    std::vector<int> rootId(runs.size(), -1);
    std::vector<ComponentRecord> out;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const std::size_t r = ds.find(k);
        if (rootId[r] < 0) {
            rootId[r] = static_cast<int>(out.size());
            out.push_back(ComponentRecord{rootId[r], {}, 0, {}, {}});
        }
        out[static_cast<std::size_t>(rootId[r])].cells.push_back(runs[k]);
    }
    return out;
}

/// Smallest divisor k of m with |f_t^k(x) - x| <= tolPer.
inline int minimal_period_of_point(const Family& F, double t, double x, int m, double tolPer) {
    if (std::abs(iterate(F, t, x, static_cast<std::size_t>(m)) - x) > tolPer)
        throw NotPeriodic("point is not periodic with period " + std::to_string(m));
    for (int k = 1; k <= m; ++k) {
        if (m % k != 0) continue;
        if (std::abs(iterate(F, t, x, static_cast<std::size_t>(k)) - x) <= tolPer) return k;
    }
    return m;
}

inline double default_tol_per(const Family& F) { return 1e-7 * F.bound(); }

struct RefineOptions {
    std::optional<double> tolPer;  // default_tol_per
    std::optional<double> cTol;    // default_c_tol
    int subsamples = 16;           // scan points per cell width
};

struct DegenerateRun {
    CellRun run;
};

struct HitRefinement {
    std::vector<T1Hit> hits;
    std::vector<DegenerateRun> degenerate;
};

namespace detail {

inline std::vector<double> roots_on_line(const Family& F, int m, double t, double xlo, double xhi,
                                         int cellsWide, const GridSpec& spec, int subsamples) {
    auto g = [&](double x) { return eval_G(F, m, t, x, spec.delta); };
    return scan_roots(g, xlo, xhi, static_cast<std::size_t>(std::max(1, cellsWide * subsamples)));
}

// Column intervals [c0, c1) covering the union of the given runs.
inline std::vector<std::pair<int, int>> merge_columns(std::vector<CellRun> runs) {
    std::sort(runs.begin(), runs.end(),
              [](const CellRun& a, const CellRun& b) { return a.c0 < b.c0; });
    std::vector<std::pair<int, int>> out;
    for (const auto& r : runs) {
        if (!out.empty() && r.c0 <= out.back().second) out.back().second = std::max(out.back().second, static_cast<int>(r.c1));
        else out.emplace_back(r.c0, r.c1);
    }
    return out;
}

}  // namespace detail

/// Zeros of x -> G_m(1, x) inside the component's top-row cells.  A top-row
/// run without a sign change is reported as degenerate (tangency).
inline HitRefinement refine_t1_hits(const Family& F, int m, const ComponentRecord& comp,
                                    const GridSpec& spec, const RefineOptions& opt = {}) {
    HitRefinement out;
    const double tolPer = opt.tolPer.value_or(default_tol_per(F));
    for (const auto& run : comp.runs_in_row(spec.nt - 1)) {
        const auto roots = detail::roots_on_line(F, m, 1.0, spec.x_at(run.c0), spec.x_at(run.c1),
                                                 run.length(), spec, opt.subsamples);
        if (roots.empty()) {
            out.degenerate.push_back({run});
            continue;
        }
        for (double x : roots) {
            T1Hit h;
            h.x = x;
            try {
                h.minimalPeriod = minimal_period_of_point(F, 1.0, x, m, tolPer);
            } catch (const NotPeriodic&) {
                h.minimalPeriod = 0;
            }
            h.itinerary = itinerary(F, 1.0, x, static_cast<std::size_t>(m), opt.cTol);
            out.hits.push_back(std::move(h));
        }
    }
    return out;
}

/// Refined zeros of G_m on up to `lines` interior grid lines t = t_i spread
/// over the component's extent.
inline std::vector<RefinedPoint> sample_component_points(const Family& F, int m,
                                                         const ComponentRecord& comp,
                                                         const GridSpec& spec, int lines = 20,
                                                         const RefineOptions& opt = {}) {
    const auto box = comp.bounds();
    const double tolPer = opt.tolPer.value_or(default_tol_per(F));
    std::vector<RefinedPoint> out;
    const int first = box.rowMin + 1, last = box.rowMax;  // interior lines
    if (last < first) return out;
    const int span = last - first;
    const int count = std::min(lines, span + 1);
    int prevLine = -1;
    for (int k = 0; k < count; ++k) {
        const int line = count == 1 ? first : first + static_cast<int>(static_cast<long long>(span) * k / (count - 1));
        if (line == prevLine) continue;
        prevLine = line;
        std::vector<CellRun> adj = comp.runs_in_row(line - 1);
        for (const auto& r : comp.runs_in_row(line)) adj.push_back(r);
        const double t = spec.t_at(line);
        for (auto [c0, c1] : detail::merge_columns(adj)) {
            for (double x : detail::roots_on_line(F, m, t, spec.x_at(c0), spec.x_at(c1), c1 - c0, spec,
                                                  opt.subsamples)) {
                RefinedPoint p{t, x, 0};
                try {
                    p.minimalPeriod = minimal_period_of_point(F, t, x, m, tolPer);
                } catch (const NotPeriodic&) {
                    p.minimalPeriod = 0;
                }
                out.push_back(p);
            }
        }
    }
    return out;
}

inline double orbit_derivative(const Family& F, double t, double x, int k) {
    double d = 1.0;
    for (int i = 0; i < k; ++i) {
        d *= F.derivative(t, x);
        x = F(t, x);
    }
    return d;
}

/// Points of the component lying on the period-(m/2) curve.  Candidate cells
/// are component cells crossed by f^{m/2}(x) = x; along that curve the
/// witness is the sign change of (f^{m/2})' + 1.
inline std::vector<HalfPeriodWitness> find_half_period_witnesses(const Family& F, int m,
                                                                 const ComponentRecord& comp,
                                                                 const GridSpec& spec,
                                                                 int subsamples = 16) {
    std::vector<HalfPeriodWitness> out;
    if (m % 2 != 0) return out;
    const int n = m / 2;
    auto h = [&](double t, double x) { return iterate(F, t, x, static_cast<std::size_t>(n)) - x; };

    // candidate cells: sign change of h among the corners
    std::vector<CellRun> cand;
    for (const auto& run : comp.cells) {
        const double t0 = spec.t_at(run.row), t1 = spec.t_at(run.row + 1);
        int start = -1;
        for (int c = run.c0; c < run.c1; ++c) {
            const double x0 = spec.x_at(c), x1 = spec.x_at(c + 1);
            const bool z = is_zero_cell(h(t0, x0), h(t0, x1), h(t1, x0), h(t1, x1));
            if (z && start < 0) start = c;
            if (!z && start >= 0) {
                cand.push_back({run.row, start, c});
                start = -1;
            }
        }
        if (start >= 0) cand.push_back({run.row, start, run.c1});
    }
    if (cand.empty()) return out;
    std::sort(cand.begin(), cand.end());
    ZeroCellSet cz{spec.nt, spec.nx, cand};
    for (const auto& cluster : label_components(cz)) {
        const auto box = cluster.bounds();
        const double tlo = spec.t_at(std::max(0, box.rowMin - 1));
        const double thi = spec.t_at(std::min(spec.nt, box.rowMax + 2));
        const double xlo = spec.x_at(std::max(0, box.colMin - 2));
        const double xhi = spec.x_at(std::min(spec.nx, box.colMax + 3));
        const double xmid = 0.5 * (xlo + xhi);
        const int wide = box.colMax - box.colMin + 5;

        auto curve = [&](double t) -> std::optional<double> {
            const auto roots = detail::scan_roots([&](double x) { return h(t, x); }, xlo, xhi,
                                          static_cast<std::size_t>(wide * subsamples));
            if (roots.empty()) return std::nullopt;
            return *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
                return std::abs(a - xmid) < std::abs(b - xmid);
            });
        };
        auto phi = [&](double t, double p) { return orbit_derivative(F, t, p, n) + 1.0; };

        constexpr int kSteps = 16;
        std::optional<std::pair<double, double>> prev;  // (t, phi)
        for (int k = 0; k <= kSteps; ++k) {
            const double t = tlo + (thi - tlo) * k / kSteps;
            const auto p = curve(t);
            if (!p) {
                prev.reset();
                continue;
            }
            const double v = phi(t, *p);
            if (prev && (v < 0) != (prev->second < 0)) {
                double a = prev->first, b = t, fa = prev->second;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (a + b);
                    const auto pm = curve(mid);
                    if (!pm) break;
                    const double fm = phi(mid, *pm);
                    if ((fm < 0) == (fa < 0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                const double ts = 0.5 * (a + b);
                const auto ps = curve(ts);
                const bool known = ps && std::any_of(out.begin(), out.end(), [&](const HalfPeriodWitness& w) {
                    return std::abs(w.t - ts) <= spec.dt() && std::abs(w.x - *ps) <= 2 * spec.dx();
                });
                if (ps && !known) out.push_back({ts, *ps, orbit_derivative(F, ts, *ps, n)});
                break;
            }
            prev = {t, v};
        }
    }
    return out;
}

/// Leftmost parameter of a component: bracketed at cell resolution, then
/// bisected on "G_m(t, .) has a sign change near the component's left end".
inline double locate_bifurcation_parameter(const Family& F, int m, const ComponentRecord& comp,
                                           const GridSpec& spec, int subsamples = 64) {
    const auto box = comp.bounds();
    std::vector<CellRun> near = comp.runs_in_row(box.rowMin);
    for (const auto& r : comp.runs_in_row(box.rowMin + 1)) near.push_back(r);
    int c0 = spec.nx, c1 = 0;
    for (const auto& r : near) {
        c0 = std::min(c0, static_cast<int>(r.c0));
        c1 = std::max(c1, static_cast<int>(r.c1));
    }
    c0 = std::max(0, c0 - 2);
    c1 = std::min(spec.nx, c1 + 2);
    auto hasRoot = [&](double t) {
        return !detail::roots_on_line(F, m, t, spec.x_at(c0), spec.x_at(c1), c1 - c0, spec, subsamples)
                    .empty();
    };
    double hi = spec.t_at(std::min(spec.nt, box.rowMin + 1));
    if (!hasRoot(hi)) hi = spec.t_at(std::min(spec.nt, box.rowMin + 2));
    if (!hasRoot(hi)) return spec.t_at(box.rowMin);
    double lo = spec.t_at(box.rowMin);
    for (int back = 1; hasRoot(lo) && lo > 0.0; ++back) lo = spec.t_at(std::max(0, box.rowMin - back));
    if (hasRoot(lo)) return lo;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hasRoot(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace unibif
