#include "reference_problems.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace cgjlp;

namespace {

std::vector<Rational> rv(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Certificate, ExactOptimumHasZeroResiduals) {
  auto lp = testdata::two_var_example().lp<Rational>();
  auto x = rv({5, 5}), y = rv({1, 2});
  auto rep = check_certificate(lp, x, y, assemble_z(lp, x, y), Rational{0});
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.worst(), 0);
}

TEST(Certificate, PrintedSolutionsPassAtLooseTolerance) {
  for (const char* name : {"nondegenerate", "five_var"}) {
    SCOPED_TRACE(name);
    for (const auto& ex : testdata::reference_problems()) {
      if (ex.name != name) continue;
      auto lp = ex.lp<double>();
      auto rep = check_certificate(lp, ex.x, ex.y, assemble_z(lp, ex.x, ex.y), 1e-2);
      EXPECT_TRUE(rep.pass) << "worst residual " << rep.worst();
    }
  }
}

TEST(Certificate, DetectsEachViolation) {
  auto lp = testdata::two_var_example().lp<Rational>();
  {
    auto x = rv({5, 6}), y = rv({1, 2});  // x1 + x2 = 11 > 10
    auto rep = check_certificate(lp, x, y, assemble_z(lp, x, y), Rational{0});
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.primal_residual, 1);
  }
  {
    auto x = rv({5, 5}), y = rv({0, 0});  // column 2: f_2 - (A'y)_2 = 1
    auto rep = check_certificate(lp, x, y, assemble_z(lp, x, y), Rational{0});
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.dual_residual, 1);
  }
  {
    auto x = rv({5, 5}), y = rv({2, 3});  // feasible pair, positive gap
    auto rep = check_certificate(lp, x, y, assemble_z(lp, x, y), Rational{0});
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.duality_gap, 5);
  }
  {
    auto x = rv({-1, 0}), y = rv({1, 2});
    auto rep = check_certificate(lp, x, y, assemble_z(lp, x, y), Rational{0});
    EXPECT_EQ(rep.primal_negativity, 1);
  }
}

TEST(Certificate, RejectsMismatchedDimensions) {
  auto lp = testdata::two_var_example().lp<double>();
  EXPECT_THROW(check_certificate(lp, {1.0}, {1.0, 2.0}, std::vector<double>(8), 1e-6), ValidationError);
}

TEST(Oracle, SimplexSolvesTwoVar) {
  auto r = simplex_oracle(testdata::two_var_example().lp<Rational>());
  ASSERT_EQ(r.status, OracleStatus::Optimal);
  EXPECT_EQ(r.value, 0);
}

TEST(Oracle, InfeasibleAndUnbounded) {
  LinearProgram<Rational> infeasible({1, 1}, std::vector<std::vector<Rational>>{{1, 0}}, {-1});
  LinearProgram<Rational> unbounded({1, 0}, std::vector<std::vector<Rational>>{{-1, 1}}, {0});
  for (auto method : {0, 1}) {
    auto solve_with = [&](const auto& lp) { return method ? enumeration_oracle(lp) : simplex_oracle(lp); };
    EXPECT_EQ(solve_with(infeasible).status, OracleStatus::Infeasible) << method;
    EXPECT_EQ(solve_with(unbounded).status, OracleStatus::Unbounded) << method;
  }
}

TEST(Oracle, RecoversReferenceProblemOptima) {
  for (const auto& ex : testdata::reference_problems()) {
    SCOPED_TRACE(ex.name);
    auto lp = ex.lp<Rational>();
    auto r = simplex_oracle(lp);
    if (!ex.solvable) {
      EXPECT_NE(r.status, OracleStatus::Optimal);
      continue;
    }
    ASSERT_EQ(r.status, OracleStatus::Optimal);
    Rational expected{0};
    for (std::size_t j = 0; j < lp.n(); ++j)
      expected += lp.f[j] * ScalarTraits<Rational>::from_rational(parse_rational(shortest_decimal(ex.x[j])));
    EXPECT_NEAR(r.value.convert_to<double>(), expected.convert_to<double>(),
                1e-3 * std::max(1.0, std::abs(expected.convert_to<double>())));
    auto rep = check_certificate(lp, r.x, r.y, assemble_z(lp, r.x, r.y), Rational{0});
    EXPECT_TRUE(rep.pass) << "simplex multipliers must certify the optimum";
  }
}

TEST(Oracle, KleeMintyValue) {
  for (std::size_t n = 2; n <= 6; ++n) {
    auto r = oracle_solve(testdata::klee_minty<Rational>(n));
    ASSERT_EQ(r.simplex.status, OracleStatus::Optimal);
    Rational expected{1};
    for (std::size_t i = 1; i < n; ++i) expected *= 100;
    EXPECT_EQ(r.simplex.value, expected);
    EXPECT_TRUE(r.methods_agree);
  }
}

TEST(Oracle, MethodsAgreeOnRandomInstances) {
  for (std::uint64_t s = 0; s < 150; ++s) {
    auto lp = random_lp<Rational>(1000 + s);
    auto v = oracle_solve(lp);
    ASSERT_TRUE(v.enumeration.has_value());
    EXPECT_TRUE(v.methods_agree) << "seed " << 1000 + s;
  }
}

TEST(Oracle, RefusesLargeInstances) {
  RandomSpec spec{11, 11, 11, 11, -9, 9};
  auto lp = random_lp<double>(1, spec);
  EXPECT_THROW(simplex_oracle(lp), OracleRefused);
  EXPECT_THROW(enumeration_oracle(lp), OracleRefused);
}

TEST(CrossCheck, SolverOutcomesOnReferenceProblemsAreClean) {
  for (const auto& ex : testdata::reference_problems()) {
    SCOPED_TRACE(ex.name);
    auto lp = ex.lp<Rational>();
    auto findings = cross_check(lp, solve(lp));
    EXPECT_TRUE(findings.empty()) << to_jsonl(findings);
  }
}

TEST(CrossCheck, FlagsWrongOptimum) {
  auto lp = testdata::two_var_example().lp<Rational>();
  auto out = solve(lp);
  auto& opt = std::get<Optimal<Rational>>(out.result);
  opt.objective = -3;
  opt.x = rv({8, 5});  // infeasible, and value -3 != 0
  opt.z = assemble_z(lp, opt.x, opt.y);
  auto findings = cross_check(lp, out, {"tampered", 7, std::nullopt, true});
  ASSERT_EQ(findings.size(), 2u);
  for (const auto& f : findings) {
    EXPECT_EQ(f.category, FindingCategory::OracleDisagreement);
    EXPECT_EQ(f.instance, "tampered");
    EXPECT_EQ(f.seed, 7u);
  }
}

TEST(CrossCheck, FlagsNoSolutionWhenOracleFindsOptimum) {
  auto lp = testdata::two_var_example().lp<Rational>();
  SolveOutcome<Rational> out;
  out.result = NoSolution{};
  auto findings = cross_check(lp, out);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].category, FindingCategory::OracleDisagreement);
}

TEST(CrossCheck, IterationLimitAndBreakdownAreReported) {
  auto lp = testdata::reference_problems()[0].lp<Rational>();
  SolverConfig cfg;
  cfg.max_iterations = 1;
  auto out = solve(lp, cfg);
  ASSERT_EQ(out.kind(), OutcomeKind::IterationLimit);
  auto f = cross_check(lp, out);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].category, FindingCategory::IterationBoundExceeded);

  SolveOutcome<Rational> broken;
  broken.result = Breakdown{BreakdownReason::ZeroPivot, "test"};
  f = cross_check(lp, broken);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].category, FindingCategory::Breakdown);
}

TEST(Findings, JsonLinesOnePerRecord) {
  std::vector<Finding> fs{{"a", 3, FindingCategory::Breakdown, "x", {{"iterations", 2}}},
                          {"b", std::nullopt, FindingCategory::RatioViolation, "y", {}}};
  auto text = to_jsonl(fs);
  std::istringstream is(text);
  std::string line;
  std::vector<nlohmann::json> parsed;
  while (std::getline(is, line)) parsed.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0]["category"], "breakdown");
  EXPECT_EQ(parsed[0]["seed"], 3);
  EXPECT_EQ(parsed[0]["values"]["iterations"], 2.0);
  EXPECT_TRUE(parsed[1]["seed"].is_null());
  EXPECT_EQ(parsed[1]["category"], "ratio-violation");
}

TEST(Findings, SinkIsSafeUnderConcurrentAppends) {
  FindingsSink sink;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&sink, t] {
      for (int i = 0; i < 250; ++i) sink.append(Finding{"t" + std::to_string(t), std::uint64_t(i), FindingCategory::Breakdown, "", {}});
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(sink.size(), 2000u);
}

TEST(RandomSuite, BoundedDrawStaysInRangeAndIsReproducible) {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    auto v = bounded_draw(a, -9, 9);
    EXPECT_GE(v, -9);
    EXPECT_LE(v, 9);
    EXPECT_EQ(v, bounded_draw(b, -9, 9));
  }
}

TEST(RandomSuite, InstancesAreSeededAndHaveNoZeroRows) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto lp = random_lp<double>(s);
    EXPECT_EQ(lp, random_lp<double>(s));
    EXPECT_GE(lp.k(), 2u);
    EXPECT_LE(lp.k(), 5u);
    EXPECT_GE(lp.n(), 2u);
    EXPECT_LE(lp.n(), 5u);
    for (std::size_t i = 0; i < lp.k(); ++i) {
      bool nz = false;
      for (double v : lp.A.row(i)) nz |= v != 0;
      EXPECT_TRUE(nz);
    }
  }
}

TEST(RandomSuite, ReportIsDeterministic) {
  SuiteOptions opts;
  opts.count = 40;
  opts.seed = 9;
  auto r1 = run_random_suite<double>(opts);
  auto r2 = run_random_suite<double>(opts);
  EXPECT_EQ(r1.instances, 40u);
  EXPECT_EQ(to_jsonl(r1.findings), to_jsonl(r2.findings));
  EXPECT_EQ(r1.summary(), r2.summary());
}
