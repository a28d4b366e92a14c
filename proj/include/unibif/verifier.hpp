#pragma once

/**
 * @file verifier.hpp
 * @brief End-to-end check of the endpoint pairing at t = 1: two period-n
 *        points lie on one periodic point component exactly when their
 *        itineraries are exchanged by nu.
 */

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "unibif/components.hpp"
#include "unibif/planar.hpp"
#include "unibif/quotient.hpp"
#include "unibif/symbolic.hpp"
#include "unibif/unimodal.hpp"

namespace unibif {

class PreconditionFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResolutionInsufficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Anomaly {
    enum class Kind {
        Tangency,       // zero cells at t = 1 without a sign change
        NotPeriodic,    // a refined t = 1 zero failed the periodicity check
        HitCount,       // a component with a number of period-n hits other than 0 or 2
        NotNuPair,      // two hits that nu does not exchange
        Unmatched,      // a symbolic pair with no component
        Unexpected,     // a numeric pair outside the symbolic matching
        Period,         // a refined point whose minimal period is not n or n/2
        Witness,        // a half-period witness with (f^{n/2})' far from -1 or at t = 1
        Shuffle,        // shuffle not constant along a component
        Separation,     // a separating path exists around a single-hit component
    };
    Kind kind;
    int component = -1;
    std::string detail;
    friend bool operator==(const Anomaly&, const Anomaly&) = default;
};

inline const char* to_string(Anomaly::Kind k) {
    switch (k) {
        case Anomaly::Kind::Tangency: return "tangency";
        case Anomaly::Kind::NotPeriodic: return "not-periodic";
        case Anomaly::Kind::HitCount: return "hit-count";
        case Anomaly::Kind::NotNuPair: return "not-nu-pair";
        case Anomaly::Kind::Unmatched: return "unmatched";
        case Anomaly::Kind::Unexpected: return "unexpected";
        case Anomaly::Kind::Period: return "period";
        case Anomaly::Kind::Witness: return "witness";
        case Anomaly::Kind::Shuffle: return "shuffle";
        case Anomaly::Kind::Separation: return "separation";
    }
    return "unknown";
}

struct ComponentSummary {
    int id = 0;
    BoundingBox bounds;
    std::size_t cellCount = 0;
    int period = 0;
    std::vector<T1Hit> t1Hits;
    std::vector<HalfPeriodWitness> halfPeriodWitnesses;
    friend bool operator==(const ComponentSummary&, const ComponentSummary&) = default;
};

struct VerificationReport {
    std::string familyName;
    int n = 0;
    GridSpec grid;
    int refinements = 0;
    std::size_t componentCount = 0;
    std::vector<ComponentSummary> components;  // components meeting t = 1
    std::vector<SequencePair> numericMatching;
    std::vector<SequencePair> symbolicMatching;
    std::vector<Anomaly> anomalies;

    bool pass() const { return anomalies.empty() && numericMatching == symbolicMatching; }
};

struct VerifyOptions {
    std::optional<GridSpec> grid;  // default_verification_grid when unset
    std::size_t threads = 1;
    RefineOptions refine;
    bool refineOnAnomaly = true;
    int sampleLines = 20;
    double witnessTol = 1e-4;
    bool separationCheck = true;
};

/// Grid used when none is given.  Period-8 curves of the quadratic family
/// come within about 5e-5 of each other near the right end of the invariant
/// interval, so the x resolution grows with n.
inline GridSpec default_verification_grid(const Family& F, int n) {
    if (n <= 6) return GridSpec::for_family(F, 2048, 2048);
    if (n == 7) return GridSpec::for_family(F, 8192, 65536);
    return GridSpec::for_family(F, 16384, 98304);
}

/// f_0 has no fixed point in [-M, M] and f_1 is a horseshoe.
inline HorseshoeCertificate check_full_family(const Family& F, std::size_t samples = 4096) {
    const double M = F.bound();
    const auto fixed0 = detail::scan_roots([&](double x) { return F(0.0, x) - x; }, -M, M, samples);
    if (!fixed0.empty())
        throw PreconditionFailed("f_0 has a fixed point near x = " + std::to_string(fixed0.front()));
    try {
        return certify_horseshoe(F, 1.0, 1e-9, samples);
    } catch (const NotAHorseshoe& e) {
        throw PreconditionFailed(std::string("f_1 is not a horseshoe: ") + e.what());
    }
}

namespace detail {

// Zero cells near a component as a raster: t runs left to right (t = 1 is
// the last column), x runs bottom to top.
struct DiagramWindow {
    int row0 = 0, row1 = 0, col0 = 0, col1 = 0;  // inclusive cell ranges

    PixelMask mask(const ZeroCellSet& z) const {
        PixelMask m(row1 - row0 + 1, col1 - col0 + 1);
        for (const auto& r : z.runs) {
            if (r.row < row0 || r.row > row1) continue;
            for (int c = std::max<int>(r.c0, col0); c < std::min<int>(r.c1, col1 + 1); ++c) m.set(to_mask(r.row, c));
        }
        return m;
    }
    Cell to_mask(int row, int col) const { return {col1 - col, row - row0}; }
};

inline std::optional<Anomaly> separation_check(const ZeroCellSet& z, const ComponentRecord& comp, const T1Hit& hit,
                                               const GridSpec& spec) {
    const auto b = comp.bounds();
    constexpr int kMargin = 8;
    DiagramWindow w{std::max(0, b.rowMin - kMargin), spec.nt - 1, std::max(0, b.colMin - kMargin),
                    std::min(spec.nx - 1, b.colMax + kMargin)};
    const PixelMask mask = w.mask(z);
    const int col = std::clamp(static_cast<int>((hit.x - spec.xMin) / spec.dx()), w.col0, w.col1);
    const Cell p0 = w.to_mask(spec.nt - 1, col);
    if (!mask.occupied(p0)) return std::nullopt;
    const int id = label_mask(mask).id[mask.index(p0)];
    try {
        separating_path(mask, id, p0);
        return Anomaly{Anomaly::Kind::Separation, comp.id,
                       "a separating path exists around the single hit " + hit.itinerary_text()};
    } catch (const NoPath& e) {
        return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline VerificationReport verify_once(const Family& F, int n, const GridSpec& spec, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.familyName = F.name();
    rep.n = n;
    rep.grid = spec;
    rep.symbolicMatching = symbolic_matching(static_cast<std::size_t>(n));

    const ZeroCellSet z = scan_zero_cells(F, n, spec, opt.threads);
    auto comps = label_components(z);
    rep.componentCount = comps.size();
    const double tolPer = opt.refine.tolPer.value_or(default_tol_per(F));
    auto add = [&](Anomaly::Kind k, int id, std::string d) { rep.anomalies.push_back({k, id, std::move(d)}); };

    for (auto& comp : comps) {
        const bool touches = comp.bounds().rowMax == spec.nt - 1;
        if (!touches) continue;
        ComponentSummary s{comp.id, comp.bounds(), comp.cell_count(), 0, {}, {}};

        auto refined = refine_t1_hits(F, n, comp, spec, opt.refine);
        for (const auto& d : refined.degenerate)
            add(Anomaly::Kind::Tangency, comp.id,
                "no sign change in t = 1 cells [" + std::to_string(d.run.c0) + ", " + std::to_string(d.run.c1) + ")");
        std::vector<const T1Hit*> filtered;
        for (const auto& h : refined.hits) {
            if (h.minimalPeriod == 0) add(Anomaly::Kind::NotPeriodic, comp.id, "t = 1 zero at x = " + fmt(h.x));
            if (h.minimalPeriod == n) filtered.push_back(&h);
            s.period = std::max(s.period, h.minimalPeriod);
        }

        if (filtered.size() == 2) {
            const auto a = filtered[0]->sequence(), b = filtered[1]->sequence();
            if (a && b && nu(*a) == *b && nu(*b) == *a) rep.numericMatching.emplace_back(*a, *b);
            else
                add(Anomaly::Kind::NotNuPair, comp.id,
                    filtered[0]->itinerary_text() + " and " + filtered[1]->itinerary_text());
        } else if (!filtered.empty()) {
            std::string list;
            for (auto* h : filtered) list += " " + h->itinerary_text();
            add(Anomaly::Kind::HitCount, comp.id, std::to_string(filtered.size()) + " period-n hits:" + list);
            if (filtered.size() == 1 && opt.separationCheck)
                if (auto a = separation_check(z, comp, *filtered[0], spec)) rep.anomalies.push_back(*a);
        }

        // interior behaviour, only for components carrying period-n points
        if (!filtered.empty()) {
            const auto pts = sample_component_points(F, n, comp, spec, opt.sampleLines, opt.refine);
            std::optional<Shuffle> sigma;
            for (auto* h : filtered)
                if (auto seq = h->sequence()) {
                    const Shuffle num = numeric_shuffle(F, 1.0, h->x, static_cast<std::size_t>(n));
                    if (!(num == shuffle_of(*seq)))
                        add(Anomaly::Kind::Shuffle, comp.id, "numeric shuffle of " + seq->str() + " differs from symbolic");
                    if (!sigma) sigma = num;
                }
            if (n % 2 == 0) {
                s.halfPeriodWitnesses = find_half_period_witnesses(F, n, comp, spec);
                for (const auto& w : s.halfPeriodWitnesses) {
                    if (!(std::abs(w.derivative + 1.0) <= opt.witnessTol) || !(w.t < 1.0))
                        add(Anomaly::Kind::Witness, comp.id,
                            "witness at t = " + fmt(w.t) + " has derivative " + fmt(w.derivative));
                    try {
                        if (minimal_period_of_point(F, w.t, w.x, n / 2, tolPer) != n / 2)
                            add(Anomaly::Kind::Witness, comp.id, "witness at t = " + fmt(w.t) + " is not of period n/2");
                    } catch (const NotPeriodic&) {
                        add(Anomaly::Kind::Witness, comp.id, "witness at t = " + fmt(w.t) + " is not periodic");
                    }
                }
            }
            for (const auto& p : pts) {
                s.period = std::max(s.period, p.minimalPeriod);
                const bool allowed = p.minimalPeriod == n || (n % 2 == 0 && p.minimalPeriod == n / 2);
                if (!allowed) {
                    add(Anomaly::Kind::Period, comp.id,
                        "point (" + fmt(p.t) + ", " + fmt(p.x) + ") has minimal period " + std::to_string(p.minimalPeriod));
                    continue;
                }
                if (p.minimalPeriod != n || !sigma) continue;
                const Shuffle here = numeric_shuffle(F, p.t, p.x, static_cast<std::size_t>(n));
                const bool same = here == *sigma ||
                                  (n % 2 == 0 && !s.halfPeriodWitnesses.empty() && here == gamma_half_shift(*sigma));
                if (!same)
                    add(Anomaly::Kind::Shuffle, comp.id, "shuffle changes at t = " + fmt(p.t) + ", x = " + fmt(p.x));
            }
        }
        s.t1Hits = std::move(refined.hits);
        rep.components.push_back(std::move(s));
    }

    canonicalize(rep.numericMatching);
    std::vector<SequencePair> missing, extra;
    std::set_difference(rep.symbolicMatching.begin(), rep.symbolicMatching.end(), rep.numericMatching.begin(),
                        rep.numericMatching.end(), std::back_inserter(missing), std::greater<>());
    std::set_difference(rep.numericMatching.begin(), rep.numericMatching.end(), rep.symbolicMatching.begin(),
                        rep.symbolicMatching.end(), std::back_inserter(extra), std::greater<>());
    for (const auto& p : missing) add(Anomaly::Kind::Unmatched, -1, p.first.str() + " / " + p.second.str());
    for (const auto& p : extra) add(Anomaly::Kind::Unexpected, -1, p.first.str() + " / " + p.second.str());
    return rep;
}

}  // namespace detail

/// Runs the check on the given (or default) grid and repeats it once on the
/// doubled grid when anomalies remain.
inline VerificationReport verify_theorem(const Family& F, int n, const VerifyOptions& opt = {}) {
    if (n < 1 || n > static_cast<int>(kMaxEnumeratedPeriod)) throw std::out_of_range("period out of range");
    check_full_family(F);
    const GridSpec spec = opt.grid.value_or(default_verification_grid(F, n));
    spec.validate();
    VerificationReport rep = detail::verify_once(F, n, spec, opt);
    if (!rep.pass() && opt.refineOnAnomaly) {
        rep = detail::verify_once(F, n, spec.refined(2), opt);
        rep.refinements = 1;
    }
    return rep;
}

/// Throws ResolutionInsufficient for a failing report.
inline void require_pass(const VerificationReport& rep) {
    if (rep.pass()) return;
    throw ResolutionInsufficient("n = " + std::to_string(rep.n) + ": " + std::to_string(rep.anomalies.size()) +
                                 " anomalies at grid " + std::to_string(rep.grid.nt) + "x" +
                                 std::to_string(rep.grid.nx) + "; refine the grid");
}

}  // namespace unibif
