#include <gtest/gtest.h>

#include <set>

#include "unibif/verifier.hpp"

using namespace unibif;

namespace {

const Family kFull = reparametrized_quadratic();

bool is_rotation_of(const PeriodicSequence& a, const char* orbit) {
    const auto o = PeriodicSequence::parse(orbit);
    for (std::size_t k = 0; k < o.period(); ++k)
        if (shift(o, k) == a) return true;
    return false;
}

}  // namespace

TEST(Verify, PeriodOne) {
    const auto rep = verify_theorem(kFull, 1);
    EXPECT_TRUE(rep.pass());
    ASSERT_EQ(rep.numericMatching.size(), 1u);
    EXPECT_EQ(rep.numericMatching[0], SequencePair(PeriodicSequence::parse("L"), PeriodicSequence::parse("R")));
    EXPECT_EQ(rep.refinements, 0);
}

TEST(Verify, PeriodThreeComponentsPairBothOrbits) {
    const auto rep = verify_theorem(kFull, 3);
    ASSERT_TRUE(rep.pass());
    ASSERT_EQ(rep.numericMatching.size(), 3u);
    for (const auto& p : rep.numericMatching) {
        const bool a = is_rotation_of(p.first, "RLL") && is_rotation_of(p.second, "RLR");
        const bool b = is_rotation_of(p.first, "RLR") && is_rotation_of(p.second, "RLL");
        EXPECT_TRUE(a || b) << p.first << " " << p.second;
    }
}

TEST(Verify, UpToSixMatchesSymbolicSide) {
    for (int n = 1; n <= 6; ++n) {
        const auto rep = verify_theorem(kFull, n);
        EXPECT_TRUE(rep.pass()) << n;
        EXPECT_EQ(rep.numericMatching, symbolic_matching(static_cast<std::size_t>(n))) << n;
        EXPECT_TRUE(rep.anomalies.empty()) << n;
        for (const auto& p : rep.numericMatching) {
            EXPECT_EQ(nu(p.first), p.second);
            EXPECT_EQ(nu(p.second), p.first);
        }
        std::size_t witnesses = 0;
        for (const auto& c : rep.components) {
            int hitsN = 0;
            for (const auto& h : c.t1Hits) hitsN += h.minimalPeriod == n;
            if (hitsN) EXPECT_EQ(hitsN, 2);
            for (const auto& w : c.halfPeriodWitnesses) {
                EXPECT_LT(w.t, 1.0);
                EXPECT_NEAR(w.derivative, -1.0, 1e-4);
                ++witnesses;
            }
        }
        if (n % 2) EXPECT_EQ(witnesses, 0u);
        if (n == 6) {
            const SequencePair c1(PeriodicSequence::parse("RLRRRR"), PeriodicSequence::parse("RLRRRL"));
            const SequencePair dbl(PeriodicSequence::parse("RLRRLL"), PeriodicSequence::parse("RLLRLR"));
            EXPECT_NE(std::find(rep.numericMatching.begin(), rep.numericMatching.end(), c1), rep.numericMatching.end());
            EXPECT_NE(std::find(rep.numericMatching.begin(), rep.numericMatching.end(), dbl), rep.numericMatching.end());
            EXPECT_EQ(rep.numericMatching.size(), 27u);
        }
    }
}

TEST(Verify, CoarseGridReportsAnomalies) {
    VerifyOptions opt;
    opt.grid = GridSpec::for_family(kFull, 64, 64);
    opt.refineOnAnomaly = false;
    const auto rep = verify_theorem(kFull, 8, opt);
    EXPECT_FALSE(rep.pass());
    EXPECT_FALSE(rep.anomalies.empty());
    EXPECT_THROW(require_pass(rep), ResolutionInsufficient);
}

TEST(Verify, RefinesOnceOnAnomaly) {
    VerifyOptions opt;
    opt.grid = GridSpec::for_family(kFull, 32, 32);
    const auto rep = verify_theorem(kFull, 5, opt);
    EXPECT_EQ(rep.refinements, 1);
    EXPECT_EQ(rep.grid.nt, 64);
}

TEST(Verify, Preconditions) {
    EXPECT_THROW(verify_theorem(quadratic(1.4, 2.1), 2), PreconditionFailed);
    EXPECT_THROW(verify_theorem(quadratic(-1.0, 2.0), 2), PreconditionFailed);
    EXPECT_NO_THROW(check_full_family(kFull));
}

TEST(Verify, DefaultGridGrowsWithPeriod) {
    EXPECT_EQ(default_verification_grid(kFull, 6).nx, 2048);
    EXPECT_GT(default_verification_grid(kFull, 8).nx, default_verification_grid(kFull, 7).nx);
}
