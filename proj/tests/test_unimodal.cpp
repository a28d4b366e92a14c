#include <gtest/gtest.h>

#include <cmath>

#include "unibif/unimodal.hpp"

using namespace unibif;

namespace {

// q_s(x) = s - x^2 evaluated at t = 0.
Family q(double s) { return quadratic(s, s + 1.0); }

double right_fixed(double s) { return (-1.0 + std::sqrt(1.0 + 4.0 * s)) / 2.0; }
double left_fixed(double s) { return (-1.0 - std::sqrt(1.0 + 4.0 * s)) / 2.0; }

}  // namespace

TEST(Horseshoe, CertificateAtTwoAndAHalf) {
    const auto c = certify_horseshoe(q(2.5), 0.0);
    const double a = left_fixed(2.5);
    EXPECT_NEAR(c.a, a, 1e-9);
    EXPECT_NEAR(c.b, -a, 1e-9);
    EXPECT_NEAR(c.a1, -std::sqrt(2.5 + a), 1e-9);
    EXPECT_NEAR(c.b1, std::sqrt(2.5 + a), 1e-9);
    EXPECT_NEAR(c.lambda, 2.0 * std::sqrt(2.5 + a), 1e-3);
    EXPECT_NEAR(c.a, -2.1583, 1e-4);
    EXPECT_NEAR(c.a1, -0.5846, 1e-4);
    EXPECT_NEAR(c.lambda, 1.169, 1e-3);
    EXPECT_LT(c.a, c.a1);
    EXPECT_LT(c.a1, 0.0);
    EXPECT_LT(c.b1, c.b);
}

TEST(Horseshoe, Failures) {
    try {
        certify_horseshoe(q(2.3), 0.0);
        FAIL();
    } catch (const NotAHorseshoe& e) {
        EXPECT_EQ(e.reason(), NotAHorseshoe::Reason::ExpansionViolated);
    }
    try {
        certify_horseshoe(q(0.1), 0.0);
        FAIL();
    } catch (const NotAHorseshoe& e) {
        EXPECT_EQ(e.reason(), NotAHorseshoe::Reason::NoPreimage);
    }
    try {
        certify_horseshoe(q(-1.0), 0.0);
        FAIL();
    } catch (const NotAHorseshoe& e) {
        EXPECT_EQ(e.reason(), NotAHorseshoe::Reason::MissingFixedPoints);
    }
    EXPECT_THROW(certify_horseshoe(q(2.5), 1.5), std::invalid_argument);
}

TEST(Itinerary, Examples) {
    const auto F = q(2.5);
    EXPECT_EQ(itinerary(F, 0.0, right_fixed(2.5), 6).str(), "RRRRRR");
    EXPECT_EQ(itinerary(F, 0.0, 0.0, 6).str(), "C");
    const double p2 = (1.0 + std::sqrt(4.0 * 2.5 - 3.0)) / 2.0;
    EXPECT_NEAR(p2, 1.8229, 1e-4);
    EXPECT_EQ(itinerary(F, 0.0, p2, 4).str(), "RLRL");
    EXPECT_THROW(itinerary(F, 0.0, 5.0, 10), OrbitEscaped);
    EXPECT_THROW(itinerary(F, 0.0, 0.5, 0), std::invalid_argument);
}

TEST(Kneading, Examples) {
    EXPECT_EQ(kneading_sequence(q(2.5), 0.0, 2).str(), "RL");
    EXPECT_EQ(kneading_sequence(q(1.0), 0.0, 6).str(), "RC");
    EXPECT_EQ(kneading_sequence(q(0.0), 0.0, 6).str(), "C");
}

TEST(PointFromItinerary, Examples) {
    const auto F = q(2.5);
    const auto c = certify_horseshoe(F, 0.0);
    EXPECT_NEAR(point_from_itinerary(F, c, PeriodicSequence::parse("R")), right_fixed(2.5), 1e-10);
    EXPECT_NEAR(point_from_itinerary(F, c, PeriodicSequence::parse("RL")), (1.0 + std::sqrt(7.0)) / 2.0, 1e-10);
    EXPECT_NEAR(point_from_itinerary(F, c, PeriodicSequence::parse("L")), left_fixed(2.5), 1e-10);
}

TEST(PointFromItinerary, RoundTripOrderAndShuffle) {
    for (double s : {2.5, 3.0}) {
        const auto F = q(s);
        const auto c = certify_horseshoe(F, 0.0);
        for (std::size_t n = 1; n <= 8; ++n) {
            auto seqs = all_min_period_sequences(n);
            std::sort(seqs.begin(), seqs.end());
            double prev = -1e300;
            for (const auto& a : seqs) {
                const double x = point_from_itinerary(F, c, a);
                std::string expect;
                for (int r = 0; r < 3; ++r) expect += a.str();
                ASSERT_EQ(itinerary(F, 0.0, x, 3 * n).str(), expect.substr(0, 3 * n)) << a << " s=" << s;
                EXPECT_NEAR(iterate(F, 0.0, x, n), x, 1e-8);
                EXPECT_LT(prev, x) << a;
                prev = x;
                EXPECT_EQ(numeric_shuffle(F, 0.0, x, n), shuffle_of(a)) << a;
            }
        }
    }
}

TEST(Family, BuiltinInvariants) {
    for (const auto& F : {reparametrized_quadratic(), quadratic(1.4, 2.1)}) {
        for (int i = 0; i <= 20; ++i) {
            const double t = i / 20.0;
            EXPECT_EQ(F.derivative(t, 0.0), 0.0);
            for (int j = 1; j <= 40; ++j) {
                const double x = F.bound() * j / 40.0;
                EXPECT_GT(F.derivative(t, -x), 0.0);
                EXPECT_LT(F.derivative(t, x), 0.0);
                const double h = 1e-5;
                const double fd = (F(t, x + h) - F(t, x - h)) / (2 * h);
                EXPECT_NEAR(fd, F.derivative(t, x), 1e-6);
            }
        }
    }
}

TEST(Family, FullQuadraticEndpoints) {
    const auto F = reparametrized_quadratic();
    for (int j = -200; j <= 200; ++j) {
        const double x = F.bound() * j / 200.0;
        EXPECT_LT(F(0.0, x) - x, 0.0);
    }
    EXPECT_NO_THROW(certify_horseshoe(F, 1.0));
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        const double s = 3.5 * t - 1.0;
        if (s > -0.25) EXPECT_LE(std::abs(right_fixed(s)), F.bound());
    }
}

TEST(Family, ExpressionFamilyAndRestriction) {
    auto F = Family::from_expression("user", "3.5*t - 1 - x^2", std::nullopt, 2.2);
    EXPECT_FALSE(F.analytic_derivative());
    EXPECT_NEAR(F.derivative(0.3, 0.7), -1.4, 1e-6);
    auto R = restrict_parameter(reparametrized_quadratic(), 0.5, 1.0);
    EXPECT_DOUBLE_EQ(R(0.0, 0.2), reparametrized_quadratic()(0.5, 0.2));
    EXPECT_DOUBLE_EQ(R(1.0, 0.2), reparametrized_quadratic()(1.0, 0.2));
    EXPECT_DOUBLE_EQ(R.axis().lo, 0.5);
    EXPECT_THROW(restrict_parameter(R, 0.6, 0.4), std::invalid_argument);
    EXPECT_THROW(Family("bad", {}, {}, 1.0), std::invalid_argument);
}

TEST(Family, JointContinuityOnGrid) {
    const auto F = reparametrized_quadratic();
    double worst = 0.0;
    const int N = 400;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double t = double(i) / N, x = -F.bound() + 2 * F.bound() * j / N;
            const double dt = 1.0 / N, dx = 2 * F.bound() / N;
            worst = std::max(worst, std::abs(F(t + dt, x + dx) - F(t, x)));
        }
    EXPECT_LT(worst, 0.1);
}
