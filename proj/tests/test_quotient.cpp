#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "unibif/components.hpp"
#include "unibif/quotient.hpp"

using namespace unibif;

namespace {

const Family kFull = reparametrized_quadratic();

// Fixed points of f_t(x) = 3.5 t - 1 - x^2, when they exist.
std::vector<double> fixed_points(double t) {
    const double disc = 1.0 + 4.0 * (3.5 * t - 1.0);
    if (disc < 0) return {};
    return {(-1.0 - std::sqrt(disc)) / 2.0, (-1.0 + std::sqrt(disc)) / 2.0};
}

}  // namespace

TEST(EvalG, Examples) {
    EXPECT_DOUBLE_EQ(eval_G(kFull, 1, 1.0, 0.0), 2.5);
    const double b = fixed_points(1.0)[1];
    EXPECT_NEAR(b, 1.1583, 1e-4);
    EXPECT_NEAR(eval_G(kFull, 2, 1.0, b), -2.0 * b + 1.0, 1e-12);
    EXPECT_NEAR(eval_G(kFull, 2, 1.0, b), -1.3166, 1e-4);
    for (double h : {1e-3, 1e-4, 1e-5}) EXPECT_NEAR(eval_G(kFull, 2, 1.0, b + h), -2.0 * b + 1.0, 3 * h);
    EXPECT_THROW(eval_G(kFull, 0, 1.0, 0.0), std::invalid_argument);
}

TEST(EvalG, EscapingOrbitsStayFinite) {
    for (int m = 1; m <= 12; ++m) EXPECT_TRUE(std::isfinite(eval_G(kFull, m, 1.0, 2.2))) << m;
}

TEST(EvalG, RatioAndDerivativeBranchesAgreeNearPeriodicCurves) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ut(0.3, 1.0), us(1.0, 2.0);
    std::bernoulli_distribution side;
    for (int k = 0; k < 2000; ++k) {
        const double t = ut(rng);
        const double p = fixed_points(t)[side(rng) ? 1 : 0];
        const double d = default_delta(p, kFull.bound());
        // f(x) - x ~ (f'(p) - 1)(x - p)
        const double slope = -2.0 * p - 1.0;
        const double x = p + us(rng) * d / slope;
        const double g = kFull(t, x) - x;
        if (!(std::abs(g) > d && std::abs(g) < 2 * d)) continue;
        const double ratio = eval_G(kFull, 2, t, x, 1e-300);
        const double deriv = eval_G(kFull, 2, t, x, 1.0);
        EXPECT_NEAR(ratio, deriv, 1e-4);
    }
}

TEST(Grid, Validation) {
    EXPECT_THROW((GridSpec{8, 64}).validate(), std::invalid_argument);
    EXPECT_THROW((GridSpec{64, 64, 1.0, 1.0}).validate(), std::invalid_argument);
    EXPECT_THROW((GridSpec{64, 64, -1.0, 1.0, -1.0}).validate(), std::invalid_argument);
    const auto g = GridSpec::for_family(kFull, 32, 64);
    EXPECT_DOUBLE_EQ(g.xMin, -2.2);
    EXPECT_DOUBLE_EQ(g.x_at(64), 2.2);
    EXPECT_EQ(g.refined().nt, 64);
}

TEST(Field, HandComputedCorners) {
    auto F = Family::from_expression("toy", "t - x^2", std::string_view("-2*x"), 1.0);
    const GridSpec g{16, 16, -1.0, 1.0};
    const auto field = sample_field(F, 1, g);
    ASSERT_EQ(field.values.size(), 17u * 17u);
    EXPECT_EQ(field.at(0, 8), 0.0);
    EXPECT_EQ(field.at(16, 0), 1.0);
    EXPECT_EQ(field.at(16, 16), -1.0);
    EXPECT_EQ(field.at(8, 12), -0.25);
    EXPECT_EQ(field.at(4, 4), 0.25 - 0.25 + 0.5);
}

TEST(ZeroCells, CornerRule) {
    EXPECT_FALSE(is_zero_cell(1, 1, 1, 1));
    EXPECT_FALSE(is_zero_cell(-1, -2, -3, -4));
    EXPECT_TRUE(is_zero_cell(1, -1, 1, 1));
    EXPECT_TRUE(is_zero_cell(0, 1, 1, 1));
    EXPECT_TRUE(is_zero_cell(-0.0, -1, -1, -1));
}

TEST(ZeroCells, NoFixedPointsEarly) {
    const auto z = scan_zero_cells(kFull, 1, GridSpec{16, 128, -2.2, 2.2}, 1);
    const GridSpec g{16, 128, -2.2, 2.2};
    for (const auto& r : z.runs) EXPECT_GE(g.t_at(r.row + 1), 3.0 / 14.0);
    const auto early = scan_zero_cells(restrict_parameter(kFull, 0.0, 0.2), 1, GridSpec::for_family(kFull, 64, 64), 1);
    EXPECT_TRUE(early.empty());
}

TEST(ZeroCells, FixedPointCurveMatchesClosedForm) {
    const auto spec = GridSpec::for_family(kFull, 256, 256);
    const auto z = scan_zero_cells(kFull, 1, spec, 2);
    std::set<std::pair<int, int>> cells;
    for (const auto& r : z.runs)
        for (int c = r.c0; c < r.c1; ++c) cells.insert({r.row, c});
    // every cell crossed by the analytic curve is flagged
    for (int k = 0; k <= 20000; ++k) {
        const double t = 3.0 / 14.0 + (1.0 - 3.0 / 14.0) * k / 20000.0;
        for (double x : fixed_points(t)) {
            const int row = std::min(spec.nt - 1, static_cast<int>(t * spec.nt));
            const int col = std::min(spec.nx - 1, static_cast<int>((x - spec.xMin) / spec.dx()));
            const double ft = t * spec.nt - row, fx = (x - spec.xMin) / spec.dx() - col;
            if (ft < 1e-9 || ft > 1 - 1e-9 || fx < 1e-9 || fx > 1 - 1e-9) continue;
            EXPECT_TRUE(cells.count({row, col})) << t << " " << x;
        }
    }
    // every flagged cell lies within one cell of the curve
    for (auto [row, col] : cells) {
        double best = 1e9;
        for (int s = 0; s <= 8; ++s) {
            const double t = spec.t_at(row) + spec.dt() * s / 8.0;
            for (double x : fixed_points(t)) best = std::min(best, std::abs(x - (spec.x_at(col) + 0.5 * spec.dx())));
        }
        EXPECT_LE(best, 1.5 * spec.dx()) << row << " " << col;
    }
    const auto comps = label_components(z);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_NEAR(spec.t_at(comps[0].bounds().rowMin), 3.0 / 14.0, spec.dt());
}

TEST(ZeroCells, ThreadingIsBitIdentical) {
    const auto spec = GridSpec::for_family(kFull, 96, 160);
    for (int m : {3, 4}) {
        const auto a = sample_field(kFull, m, spec, 1);
        const auto b = sample_field(kFull, m, spec, 4);
        ASSERT_EQ(a.values.size(), b.values.size());
        EXPECT_EQ(0, std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)));
        const auto z = extract_zero_cells(a);
        EXPECT_EQ(z, scan_zero_cells(kFull, m, spec, 1));
        EXPECT_EQ(z, scan_zero_cells(kFull, m, spec, 3, 7));
    }
}

TEST(ZeroCells, NonFiniteValuesAreReported) {
    auto F = Family::from_expression("bad", "log(x)", std::nullopt, 1.0);
    try {
        sample_field(F, 1, GridSpec{16, 16, -1.0, 1.0});
        FAIL();
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.row(), 0);
        EXPECT_EQ(e.col(), 0);
    }
}
