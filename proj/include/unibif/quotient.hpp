#pragma once

/**
 * @file quotient.hpp
 * @brief The quotient map G_m and its sampled zero set.
 *
 * For odd m, G_m(t, x) = f_t^m(x) - x.  For even m = 2n the period-n part is
 * divided out: G_m = (f^{2n}(x) - x) / (f^n(x) - x) away from the period-n
 * set, continued by (f^n)'(x) + 1 where |f^n(x) - x| <= delta.
 *
 * Orbits that leave [-10M, 10M] are frozen at the first escaped iterate;
 * G then stays bounded away from zero, so the zero set inside [-M, M] is
 * unaffected.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unibif/family.hpp"
#include "unibif/parallel.hpp"

namespace unibif {

inline double default_delta(double x, double M) { return 1e-6 * (1.0 + std::abs(x) + M); }

inline double eval_G(const Family& F, int m, double t, double x,
                     std::optional<double> delta = std::nullopt) {
    if (m < 1) throw std::invalid_argument("period must be positive");
    const double E = F.escape_bound();
    auto advance = [&](double y, int steps) {
        for (int i = 0; i < steps; ++i) {
            if (std::abs(y) > E) break;
            y = F(t, y);
        }
        return y;
    };
    if (m % 2 == 1) return advance(x, m) - x;

    const int n = m / 2;
    const double yn = advance(x, n);
    const double g = yn - x;
    const double d = delta.value_or(default_delta(x, F.bound()));
    if (std::abs(g) > d) return (advance(yn, n) - x) / g;

    double prod = 1.0;
    double y = x;
    for (int i = 0; i < n; ++i) {
        prod *= F.derivative(t, y);
        y = F(t, y);
    }
    return prod + 1.0;
}

/// Discretization of [0, 1] x [xMin, xMax] into nt x nx cells.
struct GridSpec {
    int nt = 2048;
    int nx = 2048;
    double xMin = -1.0;
    double xMax = 1.0;
    std::optional<double> delta;  // unset: default_delta(x, M)

    static GridSpec for_family(const Family& F, int nt, int nx,
                               std::optional<double> delta = std::nullopt) {
        GridSpec g{nt, nx, -F.bound(), F.bound(), delta};
        g.validate();
        return g;
    }

    void validate() const {
        if (nt < 16 || nx < 16) throw std::invalid_argument("grid needs at least 16 cells per axis");
        if (!(xMax > xMin)) throw std::invalid_argument("empty x range");
        if (delta && !(*delta > 0)) throw std::invalid_argument("delta must be positive");
    }

    double t_at(int i) const noexcept { return static_cast<double>(i) / nt; }
    double x_at(int j) const noexcept { return xMin + (xMax - xMin) * static_cast<double>(j) / nx; }
    double dt() const noexcept { return 1.0 / nt; }
    double dx() const noexcept { return (xMax - xMin) / nx; }

    GridSpec refined(int factor = 2) const {
        GridSpec g = *this;
        g.nt *= factor;
        g.nx *= factor;
        return g;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(int i, int j, double t, double x)
        : std::runtime_error("non-finite G value at corner (" + std::to_string(i) + ", " +
                             std::to_string(j) + "), t=" + std::to_string(t) +
                             " x=" + std::to_string(x)),
          i_(i), j_(j) {}
    int row() const noexcept { return i_; }
    int col() const noexcept { return j_; }

private:
    int i_, j_;
};

/// G_m sampled at the (nt+1) x (nx+1) cell corners, row-major in t.
struct ScalarField {
    GridSpec spec;
    int m = 1;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(spec.nx + 1) +
                      static_cast<std::size_t>(j)];
    }
};

namespace detail {

inline void sample_row(const Family& F, int m, const GridSpec& spec, int i, double* out) {
    const double t = spec.t_at(i);
    for (int j = 0; j <= spec.nx; ++j) {
        const double x = spec.x_at(j);
        const double v = eval_G(F, m, t, x, spec.delta);
        if (!std::isfinite(v)) throw EvaluationError(i, j, t, x);
        out[j] = v;
    }
}

}  // namespace detail

inline ScalarField sample_field(const Family& F, int m, const GridSpec& spec,
                                std::size_t threads = 1) {
    spec.validate();
    ScalarField field{spec, m, {}};
    const std::size_t w = static_cast<std::size_t>(spec.nx) + 1;
    field.values.resize(w * (static_cast<std::size_t>(spec.nt) + 1));
    parallel_for(static_cast<std::size_t>(spec.nt) + 1, threads, [&](std::size_t i) {
        detail::sample_row(F, m, spec, static_cast<int>(i), field.values.data() + i * w);
    });
    return field;
}

/// Cells [c0, c1) of cell row `row` (t between t_at(row) and t_at(row+1)).
struct CellRun {
    std::int32_t row = 0;
    std::int32_t c0 = 0;
    std::int32_t c1 = 0;

    std::int32_t length() const noexcept { return c1 - c0; }
    friend bool operator==(const CellRun&, const CellRun&) = default;
    friend auto operator<=>(const CellRun&, const CellRun&) = default;
};

/// Zero cells as row-sorted runs.
struct ZeroCellSet {
    int nt = 0;
    int nx = 0;
    std::vector<CellRun> runs;

    std::size_t cell_count() const {
        std::size_t s = 0;
        for (const auto& r : runs) s += static_cast<std::size_t>(r.length());
        return s;
    }
    bool empty() const noexcept { return runs.empty(); }
    friend bool operator==(const ZeroCellSet&, const ZeroCellSet&) = default;
};

/// A cell is a zero cell unless its four corners are all strictly positive
/// or all strictly negative.
constexpr bool is_zero_cell(double a, double b, double c, double d) noexcept {
    const bool allPos = a > 0 && b > 0 && c > 0 && d > 0;
    const bool allNeg = a < 0 && b < 0 && c < 0 && d < 0;
    return !allPos && !allNeg;
}

namespace detail {

inline void append_row_runs(int row, int nx, const double* lo, const double* hi,
                            std::vector<CellRun>& out) {
    int start = -1;
    for (int j = 0; j < nx; ++j) {
        const bool z = is_zero_cell(lo[j], lo[j + 1], hi[j], hi[j + 1]);
        if (z && start < 0) start = j;
        if (!z && start >= 0) {
            out.push_back({row, start, j});
            start = -1;
        }
    }
    if (start >= 0) out.push_back({row, start, nx});
}

}  // namespace detail

inline ZeroCellSet extract_zero_cells(const ScalarField& field) {
    ZeroCellSet z{field.spec.nt, field.spec.nx, {}};
    const std::size_t w = static_cast<std::size_t>(field.spec.nx) + 1;
    for (int i = 0; i < field.spec.nt; ++i) {
        const double* lo = field.values.data() + static_cast<std::size_t>(i) * w;
        detail::append_row_runs(i, field.spec.nx, lo, lo + w, z.runs);
    }
    return z;
}

/// Same result as extract_zero_cells(sample_field(...)) without holding the
/// whole field: corner rows are produced in parallel blocks.
inline ZeroCellSet scan_zero_cells(const Family& F, int m, const GridSpec& spec,
                                   std::size_t threads = 1, int blockRows = 64) {
    spec.validate();
    ZeroCellSet z{spec.nt, spec.nx, {}};
    const std::size_t w = static_cast<std::size_t>(spec.nx) + 1;
    std::vector<double> block(w * static_cast<std::size_t>(blockRows + 1));
    for (int base = 0; base < spec.nt; base += blockRows) {
        const int rows = std::min(blockRows, spec.nt - base);
        parallel_for(static_cast<std::size_t>(rows) + 1, threads, [&](std::size_t k) {
            detail::sample_row(F, m, spec, base + static_cast<int>(k), block.data() + k * w);
        });
        for (int k = 0; k < rows; ++k) {
            const double* lo = block.data() + static_cast<std::size_t>(k) * w;
            detail::append_row_runs(base + k, spec.nx, lo, lo + w, z.runs);
        }
    }
    return z;
}

}  // namespace unibif
