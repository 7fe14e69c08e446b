#pragma once

#include "cgjlp/lp_model.hpp"
#include "cgjlp/scalar.hpp"
#include "cgjlp/tableau.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace cgjlp {

enum class TraceLevel { None, Columns, Tableaux };

struct SolverConfig {
  /// Absolute zero tolerance; unset means the scalar's default (1e-9 for
  /// double, exact zero for rationals).
  std::optional<double> epsilon;
  Arithmetic arithmetic = Arithmetic::Float;
  /// Unset means k+n.
  std::optional<std::size_t> max_iterations;
  TraceLevel trace_level = TraceLevel::Columns;

  void validate() const {
    if (epsilon && *epsilon < 0) throw ValidationError("epsilon must be >= 0");
    if (max_iterations && *max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  }

  template <Scalar T>
  [[nodiscard]] Tolerance<T> tolerance() const {
    return {epsilon ? make_epsilon<T>(*epsilon) : ScalarTraits<T>::default_epsilon()};
  }
};

enum class Ordering { Ascending, Descending };

/// Candidate list L: columns with a positive (oriented) last-row entry.
/// Columns 0..k+n-1 come before the rest; inside each tier the entries are
/// sorted by value, ties going to the lower index.
struct CandidateList {
  std::vector<std::size_t> columns;
  Ordering ordering = Ordering::Descending;
  std::size_t cursor = 0;

  [[nodiscard]] bool empty() const { return columns.empty(); }
  [[nodiscard]] bool exhausted() const { return cursor >= columns.size(); }
  std::optional<std::size_t> next() {
    if (exhausted()) return std::nullopt;
    return columns[cursor++];
  }
};

template <Scalar T>
CandidateList build_candidates(const EqTableau<T>& tab, Ordering ordering) {
  const auto& tol = tab.tolerance();
  const std::size_t last = tab.last_row(), N = tab.pairs();
  const int s = tab.last_row_sign();
  auto value = [&](std::size_t j) -> T { return s > 0 ? tab.m(last, j) : T(-tab.m(last, j)); };

  CandidateList out;
  out.ordering = ordering;
  for (std::size_t j = 0; j < tab.columns(); ++j)
    if (tol.is_positive(value(j))) out.columns.push_back(j);
  std::stable_sort(out.columns.begin(), out.columns.end(), [&](std::size_t a, std::size_t b) {
    const bool ta = a >= N, tb = b >= N;
    if (ta != tb) return !ta;
    const T va = value(a), vb = value(b);
    if (va != vb) return ordering == Ordering::Ascending ? va < vb : va > vb;
    return a < b;
  });
  return out;
}

enum class BreakdownReason {
  SignInconsistency,    // last-row ratios of mixed sign at a MinorP state
  EmptyCandidates,      // MinorP with negative q_i but no positive last-row entry
  ZeroPivot,            // selected column not pivotable even after the row fix
  FinalizeExhausted,    // finalize found no pivotable column
  InconsistentBasis,    // a basic column is not a unit vector at extraction
};

inline const char* to_string(BreakdownReason r) {
  switch (r) {
    case BreakdownReason::SignInconsistency: return "sign-inconsistency";
    case BreakdownReason::EmptyCandidates: return "empty-candidates";
    case BreakdownReason::ZeroPivot: return "zero-pivot";
    case BreakdownReason::FinalizeExhausted: return "finalize-exhausted";
    case BreakdownReason::InconsistentBasis: return "inconsistent-basis";
  }
  return "?";
}

struct Breakdown {
  BreakdownReason reason;
  std::string detail;
};

/// Result of one pivoting instance.
struct StepResult {
  enum class Kind { Pivoted, Stopped, Broken } kind = Kind::Pivoted;
  bool pivoted = false;  // `record` is valid
  PivotRecord record;
  StopStatus stop = StopStatus::Continue;
  std::optional<Breakdown> breakdown;
  std::vector<std::string> notes;

  static StepResult stopped(StopStatus s) { return {Kind::Stopped, false, {}, s, std::nullopt, {}}; }
  static StepResult broken(BreakdownReason r, std::string detail) {
    return {Kind::Broken, false, {}, StopStatus::Continue, Breakdown{r, std::move(detail)}, {}};
  }
};

/// Finalize: pivot the listed columns in order, skipping unpivotable ones. The
/// first successful pivot ends the instance: it either terminates the solve
/// or hands control back to the main loop as a flagged reversal.
template <Scalar T>
StepResult run_finalize(EqTableau<T>& tab, const CandidateList& list, Instance instance,
                        std::size_t iteration) {
  StepResult res;
  for (std::size_t col : list.columns) {
    PivotRecord rec;
    rec.iteration = iteration;
    rec.phase = Phase::Finalize;
    rec.instance = instance;
    rec.reversal = true;
    try {
      complementary_pivot(tab, col, rec);
    } catch (const PivotError& e) {
      res.notes.push_back(std::string("finalize skipped column ") + std::to_string(col + 1) + ": " +
                          e.what());
      continue;
    }
    if (instance == Instance::MajorP) tab.add_majorp_selection(col);
    res.pivoted = true;
    res.record = tab.pivot_log().back();
    const StopStatus st = check_stop(tab);
    if (st != StopStatus::Continue) {
      res.kind = StepResult::Kind::Stopped;
      res.stop = st;
    }
    return res;
  }
  auto out = StepResult::broken(BreakdownReason::FinalizeExhausted,
                                list.empty() ? "candidate list empty" : "no listed column was pivotable");
  out.notes = std::move(res.notes);
  return out;
}

namespace detail {

template <Scalar T>
StepResult select_and_pivot(EqTableau<T>& tab, CandidateList list, Instance instance,
                            std::size_t iteration) {
  const std::size_t N = tab.pairs();
  while (auto j = list.next()) {
    if (tab.in_majorp_history(complement_column(*j, N))) continue;
    PivotRecord rec;
    rec.iteration = iteration;
    rec.phase = instance == Instance::MinorP ? Phase::MinorP : Phase::MajorP;
    rec.instance = instance;
    try {
      complementary_pivot(tab, *j, rec);
    } catch (const PivotError& e) {
      return StepResult::broken(BreakdownReason::ZeroPivot, e.what());
    }
    if (instance == Instance::MajorP) tab.add_majorp_selection(*j);
    StepResult res;
    res.pivoted = true;
    res.record = tab.pivot_log().back();
    return res;
  }
  return run_finalize(tab, list, instance, iteration);
}

}  // namespace detail

/// MinorP instance: q_{k+n+1} = 0 and some q_i < 0.
template <Scalar T>
StepResult run_minorp(EqTableau<T>& tab, std::size_t iteration) {
  const auto ratios = claim4_ratios(tab);
  if (!ratios.same_sign())
    return StepResult::broken(BreakdownReason::SignInconsistency, "last-row ratios have mixed signs");
  // A negative common ratio means rows with q_i < 0 already see positive
  // last-row entries.
  const int orientation = (!ratios.empty() && ratios.ratios.front() > 0) ? -1 : 1;
  tab.set_last_row_sign(orientation);
  CandidateList list = build_candidates(tab, Ordering::Ascending);
  if (list.empty())
    return StepResult::broken(BreakdownReason::EmptyCandidates,
                              "MinorP found no column with positive last-row entry");
  auto res = detail::select_and_pivot(tab, std::move(list), Instance::MinorP, iteration);
  if (!ratios.all_equal()) res.notes.emplace_back("last-row ratios not all equal before MinorP");
  if (!ratios.skipped_rows.empty())
    res.notes.emplace_back("last-row ratio undefined for " + std::to_string(ratios.skipped_rows.size()) +
                           " row(s)");
  return res;
}

/// MajorP instance: q_{k+n+1} != 0.
template <Scalar T>
StepResult run_majorp(EqTableau<T>& tab, std::size_t iteration) {
  const int s = tab.tolerance().sign(tab.q(tab.last_row()));
  if (s == 0) throw std::logic_error("run_majorp requires q_{k+n+1} != 0");
  tab.set_last_row_sign(s);
  CandidateList list = build_candidates(tab, Ordering::Descending);
  if (list.empty()) return StepResult::stopped(StopStatus::NoSolution);
  return detail::select_and_pivot(tab, std::move(list), Instance::MajorP, iteration);
}

/// One row of the "identified columns" table. Columns are 0-based.
struct IterationRow {
  std::optional<std::size_t> minorp;
  std::optional<std::size_t> majorp;
  bool minorp_reversal = false;
  bool majorp_reversal = false;

  bool operator==(const IterationRow&) const = default;
};

template <Scalar T>
struct Snapshot {
  std::string label;
  Matrix<T> tableau;
};

template <Scalar T>
struct SolveTrace {
  std::vector<IterationRow> rows;
  std::vector<PivotRecord> pivots;
  std::vector<Snapshot<T>> snapshots;
  std::vector<std::string> notes;
  /// MinorP-eligible states whose last-row ratios were not all equal.
  std::size_t ratio_violations = 0;
  /// MajorP pivots after which q_{k+n+1} was not zero.
  std::size_t nonzero_q_last_after_majorp = 0;

  [[nodiscard]] std::size_t iterations() const { return rows.size(); }
  [[nodiscard]] bool reversal_occurred() const {
    return std::any_of(pivots.begin(), pivots.end(), [](const PivotRecord& p) { return p.reversal; });
  }
  /// (MinorP, MajorP) column pairs, 1-based, 0 for "n. a.".
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> column_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& r : rows) out.emplace_back(r.minorp ? *r.minorp + 1 : 0, r.majorp ? *r.majorp + 1 : 0);
    return out;
  }
};

template <Scalar T>
struct Optimal {
  std::vector<T> x;
  std::vector<T> y;
  std::vector<T> z;
  T objective{};
};

struct NoSolution {};
struct IterationLimit {};

enum class OutcomeKind { Optimal, NoSolution, IterationLimit, Breakdown };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Optimal: return "Optimal";
    case OutcomeKind::NoSolution: return "NoSolution";
    case OutcomeKind::IterationLimit: return "IterationLimit";
    case OutcomeKind::Breakdown: return "Breakdown";
  }
  return "?";
}

template <Scalar T>
struct SolveOutcome {
  std::variant<Optimal<T>, NoSolution, IterationLimit, Breakdown> result;
  SolveTrace<T> trace;
  Matrix<T> final_tableau;

  [[nodiscard]] OutcomeKind kind() const { return static_cast<OutcomeKind>(result.index()); }
  [[nodiscard]] bool is_optimal() const { return kind() == OutcomeKind::Optimal; }
  [[nodiscard]] const Optimal<T>& optimal() const { return std::get<Optimal<T>>(result); }
  [[nodiscard]] const Breakdown& breakdown() const { return std::get<Breakdown>(result); }
};

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <Scalar T>
struct Extracted {
  std::vector<T> z;
  std::vector<T> x;
  std::vector<T> y;
};

/// Reads z off the basic columns: z_j = q_row for basic j, 0 otherwise.
/// y = z[0..k), x = z[k..k+n).
template <Scalar T>
Extracted<T> extract_solution(const EqTableau<T>& tab) {
  const auto& tol = tab.tolerance();
  const std::size_t N = tab.pairs();
  Extracted<T> out;
  out.z.assign(2 * N, T{0});
  for (std::size_t r = 0; r < N; ++r) {
    const std::size_t c = tab.basic_of_row()[r];
    for (std::size_t rr = 0; rr < tab.rows(); ++rr) {
      const T expect = rr == r ? T{1} : T{0};
      if (!tol.is_zero(T(tab.m(rr, c) - expect)))
        throw BasisError("basic column " + std::to_string(c + 1) + " is not a unit vector");
    }
    out.z[c] = tab.q(r);
  }
  out.y.assign(out.z.begin(), out.z.begin() + static_cast<std::ptrdiff_t>(tab.k()));
  out.x.assign(out.z.begin() + static_cast<std::ptrdiff_t>(tab.k()),
               out.z.begin() + static_cast<std::ptrdiff_t>(N));
  return out;
}

/// Runs the complementary pivoting algorithm on an already initialised tableau.
template <Scalar T>
SolveOutcome<T> solve_tableau(const LinearProgram<T>& lp, EqTableau<T> tab, const SolverConfig& cfg) {
  cfg.validate();
  SolveOutcome<T> out;
  auto& trace = out.trace;
  const auto& tol = tab.tolerance();
  const std::size_t max_it = cfg.max_iterations.value_or(lp.k() + lp.n());
  const bool keep_tableaux = cfg.trace_level == TraceLevel::Tableaux;
  if (keep_tableaux) trace.snapshots.push_back({"initial", tab.matrix()});

  auto finish = [&](auto&& result) {
    out.result = std::forward<decltype(result)>(result);
    out.final_tableau = tab.matrix();
    trace.pivots = tab.pivot_log();
    return out;
  };
  auto solved = [&]() -> SolveOutcome<T> {
    try {
      auto ex = extract_solution(tab);
      Optimal<T> opt{ex.x, ex.y, ex.z, T{0}};
      for (std::size_t j = 0; j < lp.n(); ++j) opt.objective += lp.f[j] * opt.x[j];
      return finish(std::move(opt));
    } catch (const BasisError& e) {
      return finish(Breakdown{BreakdownReason::InconsistentBasis, e.what()});
    }
  };

  while (true) {
    const StopStatus st = check_stop(tab);
    if (st == StopStatus::Solved) return solved();
    if (st == StopStatus::NoSolution) return finish(NoSolution{});

    const Instance instance = tol.is_zero(tab.q(tab.last_row())) ? Instance::MinorP : Instance::MajorP;
    const bool new_row =
        instance == Instance::MinorP || trace.rows.empty() || trace.rows.back().majorp.has_value();
    if (new_row) {
      if (trace.rows.size() >= max_it) return finish(IterationLimit{});
      trace.rows.emplace_back();
    }
    const std::size_t iteration = trace.rows.size();

    if (instance == Instance::MinorP && !claim4_ratios(tab).all_equal()) ++trace.ratio_violations;

    StepResult step = instance == Instance::MinorP ? run_minorp(tab, iteration) : run_majorp(tab, iteration);
    for (auto& note : step.notes) trace.notes.push_back("itn " + std::to_string(iteration) + ": " + note);

    if (step.kind == StepResult::Kind::Broken) return finish(*step.breakdown);
    if (step.pivoted) {
      auto& row = trace.rows.back();
      if (instance == Instance::MinorP) {
        row.minorp = step.record.column;
        row.minorp_reversal = step.record.reversal;
      } else {
        row.majorp = step.record.column;
        row.majorp_reversal = step.record.reversal;
        if (!tol.is_zero(tab.q(tab.last_row()))) ++trace.nonzero_q_last_after_majorp;
      }
      if (keep_tableaux)
        trace.snapshots.push_back(
            {(instance == Instance::MinorP ? "Z" : "P") + std::to_string(iteration), tab.matrix()});
    }
    if (step.kind == StepResult::Kind::Stopped) {
      if (step.stop == StopStatus::Solved) return solved();
      return finish(NoSolution{});
    }
  }
}

template <Scalar T>
SolveOutcome<T> solve(const LinearProgram<T>& lp, const SolverConfig& cfg = {}) {
  cfg.validate();
  return solve_tableau(lp, initialize(build_eq(lp), cfg.tolerance<T>()), cfg);
}

/// Tab-separated table of identified columns, 1-based, "n. a." when absent.
template <Scalar T>
std::string format_trace_table(const SolveTrace<T>& trace) {
  std::ostringstream os;
  os << "itn\tminorp_col\tmajorp_col\n";
  std::size_t i = 0;
  for (const auto& r : trace.rows) {
    os << ++i << '\t' << (r.minorp ? std::to_string(*r.minorp + 1) : "n. a.") << '\t'
       << (r.majorp ? std::to_string(*r.majorp + 1) : "n. a.") << '\n';
  }
  return os.str();
}

}  // namespace cgjlp
