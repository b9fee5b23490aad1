#include "bsrinf/degree.hpp"

#include <gtest/gtest.h>

using bsrinf::BSParams;
using bsrinf::DegreeCase;
using bsrinf::DegreeKind;
using bsrinf::DegreeMethod;
using bsrinf::DegreeResult;
using bsrinf::Int;

namespace {

DegreeResult closed(long long m, long long n) {
    return bsrinf::closed_form_degree(BSParams::canonical(m, n));
}

} // namespace

TEST(PExponent, SmallCases) {
    EXPECT_EQ(bsrinf::p_exponent(1, 1), 2);  // 2*1+2 = 4
    EXPECT_EQ(bsrinf::p_exponent(3, 1), 3);  // 2*3+2 = 8
    EXPECT_EQ(bsrinf::p_exponent(2, 2), 2);  // 2*1+2 = 4
    EXPECT_EQ(bsrinf::p_exponent(3, 3), 2);
    EXPECT_EQ(bsrinf::p_exponent(7, 1), 4);  // 2*7+2 = 16
    EXPECT_THROW(bsrinf::p_exponent(3, 2), bsrinf::non_divisor);
}

TEST(ClosedFormDegree, SpotValues) {
    DegreeResult r = closed(1, 2);
    EXPECT_EQ(r.kind, DegreeKind::infinite);
    EXPECT_EQ(r.case_label, DegreeCase::diff_eq_d);

    r = closed(1, 3);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    EXPECT_EQ(r.lower, 4);
    ASSERT_TRUE(r.p.has_value());
    EXPECT_EQ(*r.p, 2);
    EXPECT_EQ(r.case_label, DegreeCase::diff_eq_2d);

    r = closed(3, 5);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    EXPECT_EQ(r.lower, 5);
    EXPECT_EQ(*r.p, 3);

    r = closed(2, 5);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    EXPECT_EQ(r.lower, 2);
    EXPECT_EQ(r.case_label, DegreeCase::diff_ge_3d);

    r = closed(1, -1);
    EXPECT_EQ(r.kind, DegreeKind::infinite);
    EXPECT_EQ(r.case_label, DegreeCase::n_eq_minus_m);

    r = closed(2, 6);
    EXPECT_EQ(r.kind, DegreeKind::interval);
    EXPECT_EQ(r.lower, 2);
    EXPECT_EQ(r.upper, 4);
    EXPECT_EQ(*r.p, 2);

    r = closed(4, 10);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    EXPECT_EQ(r.lower, 2);
    EXPECT_EQ(r.case_label, DegreeCase::diff_ge_3d);

    r = closed(1, -2);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    EXPECT_EQ(r.lower, 2);
    EXPECT_EQ(r.case_label, DegreeCase::n_negative);

    r = closed(2, 4);
    EXPECT_EQ(r.kind, DegreeKind::infinite);
    EXPECT_EQ(r.case_label, DegreeCase::diff_eq_d);

    r = closed(1, 1);
    EXPECT_EQ(r.kind, DegreeKind::infinite);
    EXPECT_EQ(r.case_label, DegreeCase::n_eq_m);

    r = closed(2, -2);
    EXPECT_EQ(r.kind, DegreeKind::infinite);
    EXPECT_EQ(r.case_label, DegreeCase::n_eq_minus_m);
}

TEST(ClosedFormDegree, CaseLabelsTotalAndExclusive) {
    for (long long m = 1; m <= 10; ++m)
        for (long long n = -10; n <= 10; ++n) {
            if (n == 0 || m > std::llabs(n)) continue;
            DegreeResult r = closed(m, n);
            int matches = 0;
            if (n < 0 && n != -m) matches += r.case_label == DegreeCase::n_negative;
            if (n == -m) matches += r.case_label == DegreeCase::n_eq_minus_m;
            if (n == m) matches += r.case_label == DegreeCase::n_eq_m;
            if (n > m && (n - m) == r.params.d) matches += r.case_label == DegreeCase::diff_eq_d;
            if (n > m && (n - m) == 2 * r.params.d)
                matches += r.case_label == DegreeCase::diff_eq_2d;
            if (n > m && (n - m) >= 3 * r.params.d)
                matches += r.case_label == DegreeCase::diff_ge_3d;
            EXPECT_EQ(matches, 1) << "m=" << m << " n=" << n;
            if (r.kind != DegreeKind::infinite) EXPECT_GE(r.lower, 2);
        }
}

TEST(SearchDegree, MatchesClosedFormOnCoprimePairs) {
    auto s = bsrinf::search_degree(BSParams::canonical(1, 3), 10);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 4u);

    s = bsrinf::search_degree(BSParams::canonical(3, 5), 10);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 5u);

    s = bsrinf::search_degree(BSParams::canonical(1, 2), 10);
    EXPECT_FALSE(s.found_c.has_value());
    EXPECT_EQ(s.c_max, 10u);

    s = bsrinf::search_degree(BSParams::canonical(2, 5), 10);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 2u);
}

TEST(SearchDegree, PreconditionExcludesPlusMinusEqual) {
    EXPECT_THROW(bsrinf::search_degree(BSParams::canonical(1, 1), 5),
                 bsrinf::precondition_violated);
    EXPECT_THROW(bsrinf::search_degree(BSParams::canonical(1, -1), 5),
                 bsrinf::precondition_violated);
}

TEST(SearchDegree, QuotientThresholdsForDoubledDifference) {
    // the searched least class refines the interval upper bound; all three
    // land exactly on p + 2 here
    auto s = bsrinf::search_degree(BSParams::canonical(2, 6), 8);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 4u);

    s = bsrinf::search_degree(BSParams::canonical(3, 9), 8);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 4u);

    s = bsrinf::search_degree(BSParams::canonical(6, 10), 8);
    ASSERT_TRUE(s.found_c.has_value());
    EXPECT_EQ(*s.found_c, 5u);
}

TEST(SearchDegree, ExactTwoForWideDifferenceAndNegative) {
    for (auto [m, n] : {std::pair<long long, long long>{4, 10}, {2, 10}, {2, -4}, {3, -6}}) {
        BSParams p = BSParams::canonical(m, n);
        ASSERT_GT(p.d, 1);
        auto s = bsrinf::search_degree(p, 6);
        ASSERT_TRUE(s.found_c.has_value()) << "BS(" << m << "," << n << ")";
        EXPECT_EQ(*s.found_c, 2u) << "BS(" << m << "," << n << ")";
    }
}

TEST(CrossCheck, ConsistentOnRepresentativePairs) {
    for (auto [m, n] : {std::pair<long long, long long>{1, 3}, {3, 5}, {1, 2}, {2, 5},
                        {1, -2}, {2, 6}, {4, 10}, {2, 4}, {1, -1}, {1, 1}}) {
        bsrinf::CrossCheckReport rep = bsrinf::cross_check(BSParams::canonical(m, n), 8);
        EXPECT_TRUE(rep.consistent) << "BS(" << m << "," << n << ")";
    }
}

TEST(CrossCheck, SkipsSearchWhenStructurallyInfinite) {
    bsrinf::CrossCheckReport rep = bsrinf::cross_check(BSParams::canonical(1, -1), 8);
    EXPECT_FALSE(rep.search_ran);
    EXPECT_TRUE(rep.consistent);
}

TEST(DegreeQuery, BothMethodAttachesThreshold) {
    DegreeResult r = bsrinf::degree_query(BSParams::canonical(2, 6), DegreeMethod::both, 8);
    EXPECT_EQ(r.kind, DegreeKind::interval);
    ASSERT_TRUE(r.gc_threshold.has_value());
    EXPECT_EQ(*r.gc_threshold, 4u);

    r = bsrinf::degree_query(BSParams::canonical(1, 3), DegreeMethod::both, 8);
    EXPECT_EQ(r.kind, DegreeKind::exact);
    ASSERT_TRUE(r.gc_threshold.has_value());
    EXPECT_EQ(*r.gc_threshold, 4u);
}

TEST(DegreeSweep, DeterministicRowsWithThresholds) {
    auto rows = bsrinf::degree_sweep(6, 6, 8);
    auto rows2 = bsrinf::degree_sweep(6, 6, 8, bsrinf::kAutomorphismCandidateCap, 1);
    ASSERT_EQ(rows.size(), rows2.size());
    bool saw_13 = false, saw_26 = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DegreeResult& a = rows[i].degree;
        const DegreeResult& b = rows2[i].degree;
        EXPECT_EQ(a.params.m, b.params.m);
        EXPECT_EQ(a.params.n, b.params.n);
        EXPECT_EQ(a.kind, b.kind);
        EXPECT_EQ(a.lower, b.lower);
        EXPECT_EQ(a.upper, b.upper);
        EXPECT_EQ(a.gc_threshold, b.gc_threshold);
        if (a.params.m == 1 && a.params.n == 3) {
            saw_13 = true;
            EXPECT_EQ(a.lower, 4);
        }
        if (a.params.m == 2 && a.params.n == 6) {
            saw_26 = true;
            EXPECT_EQ(a.kind, DegreeKind::interval);
            ASSERT_TRUE(a.gc_threshold.has_value());
            EXPECT_EQ(*a.gc_threshold, 4u);
        }
    }
    EXPECT_TRUE(saw_13);
    EXPECT_TRUE(saw_26);
    // rows are ordered lexicographically by (m, n)
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& p = rows[i - 1].degree.params;
        const auto& q = rows[i].degree.params;
        EXPECT_TRUE(p.m < q.m || (p.m == q.m && p.n < q.n));
    }
}
