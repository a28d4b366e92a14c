#pragma once

/**
 * @file diagram.hpp
 * @brief Whole-diagram analysis: zero cells, components, periods, t = 1
 *        hits and half-period witnesses in one pass.
 */

#include <optional>
#include <string>
#include <vector>

#include "unibif/components.hpp"
#include "unibif/quotient.hpp"

namespace unibif {

struct DiagramOptions {
    std::size_t threads = 1;
    RefineOptions refine;
    int sampleLines = 20;
};

struct Diagram {
    ZeroCellSet cells;
    std::vector<ComponentRecord> components;
    std::vector<DegenerateRun> degenerate;
};

/// Period of a component: the largest minimal period among its refined
/// interior points and t = 1 hits.
inline Diagram build_diagram(const Family& F, int m, const GridSpec& spec, const DiagramOptions& opt = {}) {
    Diagram d;
    d.cells = scan_zero_cells(F, m, spec, opt.threads);
    d.components = label_components(d.cells);
    for (auto& c : d.components) {
        for (const auto& p : sample_component_points(F, m, c, spec, opt.sampleLines, opt.refine))
            c.period = std::max(c.period, p.minimalPeriod);
        if (c.bounds().rowMax == spec.nt - 1) {
            auto r = refine_t1_hits(F, m, c, spec, opt.refine);
            for (const auto& h : r.hits) c.period = std::max(c.period, h.minimalPeriod);
            c.t1Hits = std::move(r.hits);
            for (auto& g : r.degenerate) d.degenerate.push_back(g);
        }
        if (m % 2 == 0) c.halfPeriodWitnesses = find_half_period_witnesses(F, m, c, spec);
    }
    return d;
}

}  // namespace unibif
