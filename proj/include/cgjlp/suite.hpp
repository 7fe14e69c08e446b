#pragma once

#include "cgjlp/lp_model.hpp"
#include "cgjlp/pivot_engine.hpp"
#include "cgjlp/verify.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cgjlp {

/// Uniform integer in [lo, hi] by rejection sampling on raw mt19937_64
/// output, so the stream is identical on every standard library.
inline std::int64_t bounded_draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

struct RandomSpec {
  std::size_t kmin = 2, kmax = 5;
  std::size_t nmin = 2, nmax = 5;
  std::int64_t lo = -9, hi = 9;
};

/// Integer LP drawn from `seed`. Rows of A that come out all zero are redrawn.
template <Scalar T>
LinearProgram<T> random_lp(std::uint64_t seed, const RandomSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  const auto k = static_cast<std::size_t>(
      bounded_draw(rng, static_cast<std::int64_t>(spec.kmin), static_cast<std::int64_t>(spec.kmax)));
  const auto n = static_cast<std::size_t>(
      bounded_draw(rng, static_cast<std::int64_t>(spec.nmin), static_cast<std::int64_t>(spec.nmax)));
  Matrix<T> A(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    bool nonzero = false;
    while (!nonzero) {
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = T(bounded_draw(rng, spec.lo, spec.hi));
        nonzero |= A(i, j) != 0;
      }
    }
  }
  std::vector<T> b(k), f(n);
  for (auto& v : b) v = T(bounded_draw(rng, spec.lo, spec.hi));
  for (auto& v : f) v = T(bounded_draw(rng, spec.lo, spec.hi));
  return LinearProgram<T>(std::move(f), std::move(A), std::move(b));
}

struct SuiteOptions {
  std::size_t count = 200;
  std::uint64_t seed = 42;
  RandomSpec spec;
  bool oracle_check = true;
  SolverConfig solver;
};

struct SuiteReport {
  std::size_t instances = 0;
  std::map<std::string, std::size_t> outcomes;  // OutcomeKind name -> count
  std::vector<Finding> findings;
  std::size_t max_iterations_seen = 0;
  double seconds = 0;

  [[nodiscard]] std::string summary() const {
    std::ostringstream os;
    os << "instances\t" << instances << '\n';
    for (const auto& [name, c] : outcomes) os << "outcome " << name << '\t' << c << '\n';
    std::map<std::string, std::size_t> by_cat;
    for (const auto& f : findings) ++by_cat[to_string(f.category)];
    os << "findings\t" << findings.size() << '\n';
    for (const auto& [name, c] : by_cat) os << "finding " << name << '\t' << c << '\n';
    os << "max_iterations\t" << max_iterations_seen << '\n';
    return os.str();
  }
};

/// Instance i uses seed `seed + i`. Instances run in order; findings are
/// collected through a FindingsSink.
template <Scalar T>
SuiteReport run_random_suite(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  FindingsSink sink;
  SolverConfig cfg = opts.solver;
  cfg.trace_level = TraceLevel::Columns;
  for (std::size_t i = 0; i < opts.count; ++i) {
    const std::uint64_t seed = opts.seed + i;
    const auto lp = random_lp<T>(seed, opts.spec);
    const auto outcome = solve(lp, cfg);
    ++rep.instances;
    ++rep.outcomes[to_string(outcome.kind())];
    rep.max_iterations_seen = std::max(rep.max_iterations_seen, outcome.trace.iterations());
    CrossCheckOptions cc;
    cc.instance = "random-" + std::to_string(i);
    cc.seed = seed;
    cc.run_oracle = opts.oracle_check;
    sink.append(cross_check(lp, outcome, cc));
  }
  rep.findings = sink.snapshot();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace cgjlp
