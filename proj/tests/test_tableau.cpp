#include "reference_problems.hpp"

#include <gtest/gtest.h>

using namespace cgjlp;

namespace {

const std::string kGolden = std::string(CGJLP_DATA_DIR) + "/golden/";

/// Rank by exact elimination.
std::size_t rank_of(Matrix<Rational> m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(p, j));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || m(r, c) == 0) continue;
      Rational f = m(r, c) / m(rank, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

Matrix<Rational> stack(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  return out;
}

SolveOutcome<Rational> solve_with_tableaux(const LinearProgram<Rational>& lp) {
  SolverConfig cfg;
  cfg.trace_level = TraceLevel::Tableaux;
  return solve(lp, cfg);
}

}  // namespace

TEST(EqSystem, TwoVarLayout) {
  auto eq = build_eq(testdata::two_var_example().lp<Rational>());
  ASSERT_EQ(eq.M.rows(), 5u);
  ASSERT_EQ(eq.M.cols(), 8u);
  // row 1: [0 0 | 1 1 | 1 0 0 0], q = 10
  std::vector<Rational> row0{0, 0, 1, 1, 1, 0, 0, 0};
  for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(eq.M(0, c), row0[c]) << c;
  EXPECT_EQ(eq.q, (std::vector<Rational>{10, -5, 1, -1, 0}));
  // last row: [-b' | f' | 0 0 0 0]
  std::vector<Rational> last{-10, 5, -1, 1, 0, 0, 0, 0};
  for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(eq.M(4, c), last[c]) << c;
}

TEST(EqSystem, CoreIsSkewSymmetric) {
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_TRUE(is_skew_symmetric_core(build_eq(random_lp<Rational>(s))));
  for (const auto& ex : testdata::reference_problems()) EXPECT_TRUE(is_skew_symmetric_core(build_eq(ex.lp<Rational>())));
}

TEST(EqSystem, SkewSymmetryBreaksWhenPerturbed) {
  auto eq = build_eq(testdata::two_var_example().lp<Rational>());
  eq.M(0, 2) += 1;
  EXPECT_FALSE(is_skew_symmetric_core(eq));
}

TEST(Initialize, TwoVarMatchesPrintedTableauExactly) {
  auto tab = initialize(build_eq(testdata::two_var_example().lp<Rational>()));
  EXPECT_EQ(tab.matrix(), testdata::read_matrix<Rational>(kGolden + "two_var_initial.txt"));
  for (std::size_t i = 0; i < tab.pairs(); ++i) EXPECT_EQ(tab.basic_of_row()[i], tab.pairs() + i);
}

TEST(Initialize, ZeroLastRowIsIdentity) {
  // k = n = 1 with b = f = 0: the last row is zero, initialization changes nothing.
  LinearProgram<Rational> lp({0}, std::vector<std::vector<Rational>>{{3}}, {0});
  auto eq = build_eq(lp);
  auto tab = initialize(eq);
  for (std::size_t r = 0; r < eq.M.rows(); ++r) {
    for (std::size_t c = 0; c < eq.M.cols(); ++c) EXPECT_EQ(tab.m(r, c), eq.M(r, c));
    EXPECT_EQ(tab.q(r), eq.q[r]);
  }
}

TEST(Walkthrough, TwoVarSnapshotsMatchPrintedTableaux) {
  auto out = solve_with_tableaux(testdata::two_var_example().lp<Rational>());
  ASSERT_TRUE(out.is_optimal());
  const std::vector<std::string> labels{"initial", "Z1", "P1", "Z2", "P2"};
  ASSERT_EQ(out.trace.snapshots.size(), labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    SCOPED_TRACE(labels[s]);
    EXPECT_EQ(out.trace.snapshots[s].label, labels[s]);
    auto golden = testdata::read_matrix<double>(kGolden + "two_var_" + labels[s] + ".txt");
    const auto& got = out.trace.snapshots[s].tableau;
    ASSERT_EQ(golden.rows(), got.rows());
    ASSERT_EQ(golden.cols(), got.cols());
    for (std::size_t r = 0; r < got.rows(); ++r)
      for (std::size_t c = 0; c < got.cols(); ++c)
        EXPECT_NEAR(got(r, c).convert_to<double>(), golden(r, c), 5e-4) << "(" << r + 1 << "," << c + 1 << ")";
  }
}

TEST(Pivot, ProducesUnitColumnAndUpdatesBasis) {
  auto tab = initialize(build_eq(testdata::two_var_example().lp<Rational>()));
  complementary_pivot(tab, 3);
  for (std::size_t r = 0; r < tab.rows(); ++r) EXPECT_EQ(tab.m(r, 3), r == 3 ? 1 : 0);
  EXPECT_EQ(tab.basic_of_row()[3], 3u);
  EXPECT_TRUE(tab.is_basic(3));
  EXPECT_FALSE(tab.is_basic(7));
  ASSERT_EQ(tab.pivot_log().size(), 1u);
  EXPECT_EQ(tab.pivot_log()[0].pivot_row, 3u);
}

TEST(Pivot, ZeroPivotIsRejected) {
  auto tab = initialize(build_eq(testdata::two_var_example().lp<Rational>()));
  // entry (1,3) of the initial tableau is 0
  EXPECT_THROW(gj_pivot(tab, 0, 2), PivotError);
}

TEST(Pivot, ComplementIndices) {
  EXPECT_EQ(complement_column(0, 4), 4u);
  EXPECT_EQ(complement_column(6, 4), 2u);
  EXPECT_EQ(complement_row(6, 4), 2u);
  EXPECT_EQ(complement_row(1, 4), 1u);
  EXPECT_THROW(complement_column(8, 4), std::out_of_range);
}

TEST(RowFix, AddsLastRowWhenPivotEntryIsZero) {
  auto tab = initialize(build_eq(testdata::two_var_example().lp<Rational>()));
  tab.mutable_matrix()(0, 0) = 0;
  auto before = tab.matrix();
  EXPECT_TRUE(row_fix_for_pivot(tab, 0));
  for (std::size_t c = 0; c <= tab.columns(); ++c) EXPECT_EQ(tab.matrix()(0, c), before(0, c) + before(4, c));
  EXPECT_FALSE(row_fix_for_pivot(tab, 3));
}

TEST(RowFix, UnfixableColumnThrows) {
  auto tab = initialize(build_eq(testdata::two_var_example().lp<Rational>()));
  // column 5 has a zero last-row entry; clearing its pivot leaves nothing to add.
  tab.mutable_matrix()(0, 4) = 0;
  EXPECT_THROW(row_fix_for_pivot(tab, 4), PivotError);
}

TEST(RowFix, RowFixExampleNeedsOneFix) {
  auto out = solve(testdata::row_fix_example().lp<Rational>());
  std::size_t fixes = 0;
  for (const auto& p : out.trace.pivots)
    if (p.row_fixed) {
      ++fixes;
      EXPECT_EQ(p.column, 2u);
    }
  EXPECT_EQ(fixes, 1u);
}

TEST(Property, EveryStateIsRowEquivalentToTheInitialTableau) {
  std::vector<LinearProgram<Rational>> lps;
  for (const auto& ex : testdata::reference_problems()) lps.push_back(ex.lp<Rational>());
  for (std::uint64_t s = 0; s < 30; ++s) lps.push_back(random_lp<Rational>(500 + s));
  for (const auto& lp : lps) {
    auto out = solve_with_tableaux(lp);
    const auto& init = out.trace.snapshots.front().tableau;
    const std::size_t r0 = rank_of(init);
    for (const auto& snap : out.trace.snapshots) {
      EXPECT_EQ(rank_of(snap.tableau), r0) << snap.label;
      EXPECT_EQ(rank_of(stack(init, snap.tableau)), r0) << snap.label;
    }
  }
}

TEST(StopRule, Cases) {
  auto lp = testdata::two_var_example().lp<Rational>();
  auto tab = initialize(build_eq(lp));
  EXPECT_EQ(check_stop(tab), StopStatus::Continue);  // q_2 = -5 < 0

  auto solved = solve(lp).final_tableau;
  EXPECT_EQ(check_stop(testdata::as_tableau(solved, lp)), StopStatus::Solved);

  // last row oriented positive with no positive entry elsewhere
  Matrix<Rational> m = tab.matrix();
  for (std::size_t c = 0; c < m.cols(); ++c) m(4, c) = -1;
  m(4, m.cols() - 1) = 2;
  EXPECT_EQ(check_stop(testdata::as_tableau(m, lp)), StopStatus::NoSolution);
  for (std::size_t c = 0; c < m.cols(); ++c) m(4, c) = 1;
  m(4, m.cols() - 1) = -2;
  EXPECT_EQ(check_stop(testdata::as_tableau(m, lp)), StopStatus::NoSolution);
  m(4, 0) = -1;
  EXPECT_EQ(check_stop(testdata::as_tableau(m, lp)), StopStatus::Continue);
}

TEST(LastRowRatio, RatiosAreEqualAtEveryMinorPState) {
  std::vector<LinearProgram<Rational>> lps{testdata::two_var_example().lp<Rational>(),
                                           testdata::row_fix_example().lp<Rational>()};
  for (const auto& ex : testdata::reference_problems()) lps.push_back(ex.lp<Rational>());
  for (const auto& lp : lps) {
    auto out = solve_with_tableaux(lp);
    for (const auto& snap : out.trace.snapshots) {
      auto tab = testdata::as_tableau(snap.tableau, lp);
      if (tab.q(tab.last_row()) != 0 || check_stop(tab) != StopStatus::Continue) continue;
      auto r = claim4_ratios(tab);
      EXPECT_TRUE(r.all_equal()) << snap.label;
      EXPECT_TRUE(r.skipped_rows.empty()) << snap.label;
    }
  }
}

TEST(LastRowRatio, RowFixExampleFirstTwoRatios) {
  auto lp = testdata::row_fix_example().lp<Rational>();
  auto out = solve_with_tableaux(lp);
  std::vector<Rational> seq;
  for (const auto& snap : out.trace.snapshots) {
    auto tab = testdata::as_tableau(snap.tableau, lp);
    if (tab.q(tab.last_row()) != 0) continue;
    auto r = claim4_ratios(tab);
    if (!r.empty()) seq.push_back(r.ratios.front());
  }
  ASSERT_GE(seq.size(), 2u);
  EXPECT_EQ(seq[0], -1);
  EXPECT_EQ(seq[1], Rational(-1) / 7);
}

TEST(Dump, FixedWidthFourDecimalsNoNegativeZero) {
  Matrix<double> m(1, 3);
  m(0, 0) = -0.0;
  m(0, 1) = 1.0 / 12.0;
  m(0, 2) = -0.00001;
  EXPECT_EQ(dump_matrix(m), "    0.0000     0.0833     0.0000\n");
  Matrix<Rational> q(1, 1);
  q(0, 0) = Rational(1) / 3;
  EXPECT_EQ(dump_matrix(q, true), "1/3\n");
}
