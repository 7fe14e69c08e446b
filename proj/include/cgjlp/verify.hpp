#pragma once

#include "cgjlp/lp_model.hpp"
#include "cgjlp/matrix.hpp"
#include "cgjlp/pivot_engine.hpp"
#include "cgjlp/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cgjlp {

// ---------------------------------------------------------------------------
// Certificates

/// Residuals of a claimed primal/dual optimum. All fields are >= 0.
template <Scalar T>
struct CertificateReport {
  T primal_residual{};    // max(0, max_i (Ax - b)_i)
  T primal_negativity{};  // max(0, -min_j x_j)
  T dual_residual{};      // max(0, max_j (f - A'y)_j)
  T dual_negativity{};    // max(0, -min_i y_i)
  T duality_gap{};        // |f'x - b'y|
  T complementarity{};    // max_j |z_j z_{k+n+j}|
  T tolerance{};
  bool pass = false;

  [[nodiscard]] T worst() const {
    return std::max({primal_residual, primal_negativity, dual_residual, dual_negativity, duality_gap,
                     complementarity});
  }
};

template <Scalar T>
CertificateReport<T> check_certificate(const LinearProgram<T>& lp, const std::vector<T>& x,
                                       const std::vector<T>& y, const std::vector<T>& z, const T& tol) {
  const std::size_t k = lp.k(), n = lp.n(), N = k + n;
  if (x.size() != n || y.size() != k || z.size() != 2 * N)
    throw ValidationError("certificate vectors do not match LP dimensions");
  CertificateReport<T> rep;
  rep.tolerance = tol;
  const T zero{0};
  for (std::size_t i = 0; i < k; ++i) {
    T row{0};
    for (std::size_t j = 0; j < n; ++j) row += lp.A(i, j) * x[j];
    rep.primal_residual = std::max(rep.primal_residual, T(row - lp.b[i]));
    rep.dual_negativity = std::max(rep.dual_negativity, T(-y[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    T col{0};
    for (std::size_t i = 0; i < k; ++i) col += lp.A(i, j) * y[i];
    rep.dual_residual = std::max(rep.dual_residual, T(lp.f[j] - col));
    rep.primal_negativity = std::max(rep.primal_negativity, T(-x[j]));
  }
  T fx{0}, by{0};
  for (std::size_t j = 0; j < n; ++j) fx += lp.f[j] * x[j];
  for (std::size_t i = 0; i < k; ++i) by += lp.b[i] * y[i];
  rep.duality_gap = ScalarTraits<T>::abs(T(fx - by));
  for (std::size_t j = 0; j < N; ++j)
    rep.complementarity = std::max(rep.complementarity, ScalarTraits<T>::abs(T(z[j] * z[N + j])));
  rep.primal_residual = std::max(rep.primal_residual, zero);
  rep.dual_residual = std::max(rep.dual_residual, zero);
  rep.primal_negativity = std::max(rep.primal_negativity, zero);
  rep.dual_negativity = std::max(rep.dual_negativity, zero);
  rep.pass = rep.worst() <= tol;
  return rep;
}

/// Default certificate tolerance: 1e-6 for doubles, exact for rationals.
template <Scalar T>
T default_certificate_tolerance() {
  if constexpr (std::is_same_v<T, double>)
    return 1e-6;
  else
    return T{0};
}

/// z = (y, x, Ax-b slack, A'y-f surplus) for a primal/dual pair.
template <Scalar T>
std::vector<T> assemble_z(const LinearProgram<T>& lp, const std::vector<T>& x, const std::vector<T>& y) {
  const std::size_t k = lp.k(), n = lp.n();
  std::vector<T> z(2 * (k + n), T{0});
  for (std::size_t i = 0; i < k; ++i) z[i] = y[i];
  for (std::size_t j = 0; j < n; ++j) z[k + j] = x[j];
  for (std::size_t i = 0; i < k; ++i) {
    T s = lp.b[i];
    for (std::size_t j = 0; j < n; ++j) s -= lp.A(i, j) * x[j];
    z[k + n + i] = s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    T s = -lp.f[j];
    for (std::size_t i = 0; i < k; ++i) s += lp.A(i, j) * y[i];
    z[k + n + k + j] = s;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Reference solvers

enum class OracleStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Optimal: return "Optimal";
    case OracleStatus::Infeasible: return "Infeasible";
    case OracleStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

template <Scalar T>
struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  std::vector<T> x;
  std::vector<T> y;
  T value{};
};

class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kSimplexOracleLimit = 20;
inline constexpr std::size_t kEnumerationOracleLimit = 12;

namespace detail {

/// Dense tableau for the textbook simplex. Rows hold [coefficients | rhs].
template <Scalar T>
class SimplexTableau {
 public:
  SimplexTableau(Matrix<T> rows, std::vector<std::size_t> basis, Tolerance<T> tol)
      : t_(std::move(rows)), basis_(std::move(basis)), tol_(tol), active_(t_.rows(), true) {}

  enum class Result { Optimal, Unbounded };

  /// Maximizes cost'w over the current feasible basis with Bland's rule.
  /// Columns with allowed[j] == false never enter.
  Result maximize(const std::vector<T>& cost, const std::vector<bool>& allowed) {
    const std::size_t cols = t_.cols() - 1;
    while (true) {
      auto d = reduced_costs(cost);
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols && !enter; ++j)
        if (allowed[j] && !is_basic(j) && tol_.is_positive(d[j])) enter = j;
      if (!enter) return Result::Optimal;
      std::optional<std::size_t> leave;
      T best{};
      for (std::size_t i = 0; i < t_.rows(); ++i) {
        if (!active_[i] || !tol_.is_positive(t_(i, *enter))) continue;
        T ratio = t_(i, cols) / t_(i, *enter);
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return Result::Unbounded;
      pivot(*leave, *enter);
    }
  }

  std::vector<T> reduced_costs(const std::vector<T>& cost) const {
    const std::size_t cols = t_.cols() - 1;
    std::vector<T> d(cost.begin(), cost.begin() + static_cast<std::ptrdiff_t>(cols));
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      if (!active_[i]) continue;
      const T& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) d[j] -= cb * t_(i, j);
    }
    return d;
  }

  void pivot(std::size_t r, std::size_t c) {
    const T p = t_(r, c);
    for (auto& v : t_.row(r)) v /= p;
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      if (i == r || t_(i, c) == 0) continue;
      const T factor = t_(i, c);
      for (std::size_t j = 0; j < t_.cols(); ++j) t_(i, j) -= factor * t_(r, j);
    }
    basis_[r] = c;
  }

  [[nodiscard]] bool is_basic(std::size_t j) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (active_[i] && basis_[i] == j) return true;
    return false;
  }

  void deactivate(std::size_t r) { active_[r] = false; }
  [[nodiscard]] bool active(std::size_t r) const { return active_[r]; }
  [[nodiscard]] const Matrix<T>& table() const { return t_; }
  [[nodiscard]] const std::vector<std::size_t>& basis() const { return basis_; }
  [[nodiscard]] T value(std::size_t j) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (active_[i] && basis_[i] == j) return t_(i, t_.cols() - 1);
    return T{0};
  }

 private:
  Matrix<T> t_;
  std::vector<std::size_t> basis_;
  Tolerance<T> tol_;
  std::vector<bool> active_;
};

/// Solves B w = rhs for square B (Gauss-Jordan with partial pivoting).
template <Scalar T>
std::optional<std::vector<T>> solve_square(Matrix<T> B, std::vector<T> rhs, const Tolerance<T>& tol) {
  const std::size_t m = B.rows();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (ScalarTraits<T>::abs(B(r, c)) > ScalarTraits<T>::abs(B(best, c))) best = r;
    if (tol.is_zero(B(best, c))) return std::nullopt;
    if (best != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(B(c, j), B(best, j));
      std::swap(rhs[c], rhs[best]);
    }
    const T p = B(c, c);
    for (std::size_t j = 0; j < m; ++j) B(c, j) /= p;
    rhs[c] /= p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || B(r, c) == 0) continue;
      const T factor = B(r, c);
      for (std::size_t j = 0; j < m; ++j) B(r, j) -= factor * B(c, j);
      rhs[r] -= factor * rhs[c];
    }
  }
  return rhs;
}

/// Calls fn(subset) for every size-`choose` subset of {0..total-1}, lexicographically.
template <typename Fn>
void for_each_subset(std::size_t total, std::size_t choose, Fn&& fn) {
  if (choose > total) return;
  std::vector<std::size_t> idx(choose);
  for (std::size_t i = 0; i < choose; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = choose;
    while (i > 0 && idx[i - 1] == total - choose + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < choose; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Best basic feasible solution of  opt c'w  s.t.  G w = h, w >= 0.
template <Scalar T>
struct EnumBest {
  bool feasible = false;
  T value{};
  std::vector<T> w;
};

template <Scalar T>
EnumBest<T> enumerate_bases(const Matrix<T>& G, const std::vector<T>& h, const std::vector<T>& c,
                            bool maximize, const Tolerance<T>& tol) {
  const std::size_t m = G.rows(), cols = G.cols();
  EnumBest<T> best;
  for_each_subset(cols, m, [&](const std::vector<std::size_t>& subset) {
    Matrix<T> B(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) B(i, j) = G(i, subset[j]);
    auto sol = solve_square(B, h, tol);
    if (!sol) return;
    for (const auto& v : *sol)
      if (tol.is_negative(v)) return;
    T value{0};
    for (std::size_t j = 0; j < m; ++j) value += c[subset[j]] * (*sol)[j];
    if (!best.feasible || (maximize ? value > best.value : value < best.value)) {
      best.feasible = true;
      best.value = value;
      best.w.assign(cols, T{0});
      for (std::size_t j = 0; j < m; ++j) best.w[subset[j]] = (*sol)[j];
    }
  });
  return best;
}

}  // namespace detail

/// Two-phase dense simplex with Bland's rule. y holds the simplex multipliers.
template <Scalar T>
OracleResult<T> simplex_oracle(const LinearProgram<T>& lp, Tolerance<T> tol = {ScalarTraits<T>::default_epsilon()}) {
  const std::size_t k = lp.k(), n = lp.n();
  if (k + n > kSimplexOracleLimit)
    throw OracleRefused("instance too large for the simplex oracle (k+n=" + std::to_string(k + n) + ")");
  // Columns: x (n) | slack (k) | artificial (one per row with b_i < 0) | rhs
  std::vector<std::size_t> art_row;
  for (std::size_t i = 0; i < k; ++i)
    if (lp.b[i] < 0) art_row.push_back(i);
  const std::size_t na = art_row.size(), cols = n + k + na;
  Matrix<T> t(k, cols + 1);
  std::vector<std::size_t> basis(k);
  std::size_t a = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const bool neg = lp.b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = neg ? T(-lp.A(i, j)) : lp.A(i, j);
    t(i, n + i) = neg ? T{-1} : T{1};
    t(i, cols) = neg ? T(-lp.b[i]) : lp.b[i];
    if (neg) {
      t(i, n + k + a) = T{1};
      basis[i] = n + k + a++;
    } else {
      basis[i] = n + i;
    }
  }
  detail::SimplexTableau<T> tab(std::move(t), std::move(basis), tol);
  OracleResult<T> out;

  if (na > 0) {
    std::vector<T> phase1(cols, T{0});
    for (std::size_t j = n + k; j < cols; ++j) phase1[j] = T{-1};
    tab.maximize(phase1, std::vector<bool>(cols, true));
    T infeas{0};
    for (std::size_t j = n + k; j < cols; ++j) infeas += tab.value(j);
    if (tol.is_positive(infeas)) {
      out.status = OracleStatus::Infeasible;
      return out;
    }
    // Drive zero-level artificials out; drop rows that turn out redundant.
    for (std::size_t i = 0; i < k; ++i) {
      if (tab.basis()[i] < n + k) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n + k && !col; ++j)
        if (!tol.is_zero(tab.table()(i, j)) && !tab.is_basic(j)) col = j;
      if (col)
        tab.pivot(i, *col);
      else
        tab.deactivate(i);
    }
  }

  std::vector<T> cost(cols, T{0});
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.f[j];
  std::vector<bool> allowed(cols, false);
  for (std::size_t j = 0; j < n + k; ++j) allowed[j] = true;
  if (tab.maximize(cost, allowed) == detail::SimplexTableau<T>::Result::Unbounded) {
    out.status = OracleStatus::Unbounded;
    return out;
  }
  out.status = OracleStatus::Optimal;
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.x[j] = tab.value(j);
    out.value += lp.f[j] * out.x[j];
  }
  const auto d = tab.reduced_costs(cost);
  out.y.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.y[i] = -d[n + i];
  return out;
}

/// Exhaustive basis enumeration of the primal and of the dual.
template <Scalar T>
OracleResult<T> enumeration_oracle(const LinearProgram<T>& lp, Tolerance<T> tol = {ScalarTraits<T>::default_epsilon()}) {
  const std::size_t k = lp.k(), n = lp.n();
  if (k + n > kEnumerationOracleLimit)
    throw OracleRefused("instance too large for basis enumeration (k+n=" + std::to_string(k + n) + ")");
  // Primal: [A | I] (x, s) = b.
  Matrix<T> G(k, n + k);
  std::vector<T> c(n + k, T{0});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) G(i, j) = lp.A(i, j);
    G(i, n + i) = T{1};
  }
  for (std::size_t j = 0; j < n; ++j) c[j] = lp.f[j];
  auto primal = detail::enumerate_bases(G, lp.b, c, true, tol);
  OracleResult<T> out;
  if (!primal.feasible) {
    out.status = OracleStatus::Infeasible;
    return out;
  }
  // Dual: [A' | -I] (y, t) = f, minimize b'y.
  Matrix<T> H(n, k + n);
  std::vector<T> d(k + n, T{0});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) H(j, i) = lp.A(i, j);
    H(j, k + j) = T{-1};
  }
  for (std::size_t i = 0; i < k; ++i) d[i] = lp.b[i];
  auto dual = detail::enumerate_bases(H, lp.f, d, false, tol);
  if (!dual.feasible) {
    out.status = OracleStatus::Unbounded;
    return out;
  }
  out.status = OracleStatus::Optimal;
  out.value = primal.value;
  out.x.assign(primal.w.begin(), primal.w.begin() + static_cast<std::ptrdiff_t>(n));
  out.y.assign(dual.w.begin(), dual.w.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

template <Scalar T>
bool values_agree(const T& a, const T& b, const T& tol) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
  } else {
    return ScalarTraits<T>::abs(T(a - b)) <= tol;
  }
}

/// Reference answer: the simplex oracle, seconded by basis enumeration where
/// the instance is small enough.
template <Scalar T>
struct OracleVerdict {
  OracleResult<T> simplex;
  std::optional<OracleResult<T>> enumeration;
  bool methods_agree = true;
};

template <Scalar T>
OracleVerdict<T> oracle_solve(const LinearProgram<T>& lp, Tolerance<T> tol = {ScalarTraits<T>::default_epsilon()}) {
  OracleVerdict<T> v;
  v.simplex = simplex_oracle(lp, tol);
  if (lp.k() + lp.n() <= kEnumerationOracleLimit) {
    v.enumeration = enumeration_oracle(lp, tol);
    const auto& e = *v.enumeration;
    v.methods_agree = e.status == v.simplex.status &&
                      (e.status != OracleStatus::Optimal ||
                       values_agree(e.value, v.simplex.value,
                                    std::is_same_v<T, double> ? T(1e-8) : T(0)));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Findings

enum class FindingCategory { IterationBoundExceeded, OracleDisagreement, Breakdown, RatioViolation, Unverified };

inline const char* to_string(FindingCategory c) {
  switch (c) {
    case FindingCategory::IterationBoundExceeded: return "iteration-bound-exceeded";
    case FindingCategory::OracleDisagreement: return "oracle-disagreement";
    case FindingCategory::Breakdown: return "breakdown";
    case FindingCategory::RatioViolation: return "ratio-violation";
    case FindingCategory::Unverified: return "unverified";
  }
  return "?";
}

struct Finding {
  std::string instance;
  std::optional<std::uint64_t> seed;
  FindingCategory category = FindingCategory::Breakdown;
  std::string details;
  std::vector<std::pair<std::string, double>> values;

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["instance"] = instance;
    if (seed)
      j["seed"] = *seed;
    else
      j["seed"] = nullptr;
    j["category"] = to_string(category);
    j["details"] = details;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const auto& [name, v] : values) vals[name] = v;
    j["values"] = vals;
    return j;
  }
};

/// Append-only collector; safe for concurrent appenders.
class FindingsSink {
 public:
  void append(Finding f) {
    std::lock_guard lock(mu_);
    findings_.push_back(std::move(f));
  }
  void append(const std::vector<Finding>& fs) {
    std::lock_guard lock(mu_);
    findings_.insert(findings_.end(), fs.begin(), fs.end());
  }
  [[nodiscard]] std::vector<Finding> snapshot() const {
    std::lock_guard lock(mu_);
    return findings_;
  }
  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock(mu_);
    return findings_.size();
  }

 private:
  mutable std::mutex mu_;
  std::vector<Finding> findings_;
};

/// One JSON object per line.
inline std::string to_jsonl(const std::vector<Finding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    out += f.to_json().dump();
    out += '\n';
  }
  return out;
}

struct CrossCheckOptions {
  std::string instance = "instance";
  std::optional<std::uint64_t> seed;
  /// Certificate / value tolerance; unset means 1e-6 (double) or exact.
  std::optional<double> tolerance;
  /// Compare against the reference solvers (the certificate is always checked).
  bool run_oracle = true;
};

/// Compares a solver outcome with the oracle and the paper's claims.
template <Scalar T>
std::vector<Finding> cross_check(const LinearProgram<T>& lp, const SolveOutcome<T>& outcome,
                                 const CrossCheckOptions& opts = {}) {
  std::vector<Finding> out;
  const T tol = opts.tolerance ? make_epsilon<T>(*opts.tolerance) : default_certificate_tolerance<T>();
  auto add = [&](FindingCategory c, std::string details, std::vector<std::pair<std::string, double>> values = {}) {
    out.push_back({opts.instance, opts.seed, c, std::move(details), std::move(values)});
  };
  auto d = [](const T& v) { return ScalarTraits<T>::to_double(v); };
  const double bound = static_cast<double>(lp.k() + lp.n());
  const double its = static_cast<double>(outcome.trace.iterations());

  switch (outcome.kind()) {
    case OutcomeKind::Breakdown: {
      const auto& b = outcome.breakdown();
      add(FindingCategory::Breakdown, std::string(to_string(b.reason)) + ": " + b.detail,
          {{"iterations", its}});
      break;
    }
    case OutcomeKind::IterationLimit:
      add(FindingCategory::IterationBoundExceeded, "iteration limit reached before termination",
          {{"iterations", its}, {"k_plus_n", bound}});
      break;
    default:
      if (its > bound)
        add(FindingCategory::IterationBoundExceeded, "terminated after more than k+n iterations",
            {{"iterations", its}, {"k_plus_n", bound}});
      break;
  }
  if (outcome.trace.ratio_violations > 0)
    add(FindingCategory::RatioViolation, "last-row ratios not all equal at a MinorP state",
        {{"states", static_cast<double>(outcome.trace.ratio_violations)}});

  if (outcome.kind() != OutcomeKind::Optimal && outcome.kind() != OutcomeKind::NoSolution) return out;

  if (outcome.is_optimal()) {
    const auto& opt = outcome.optimal();
    auto cert = check_certificate(lp, opt.x, opt.y, opt.z, tol);
    if (!cert.pass)
      add(FindingCategory::OracleDisagreement, "claimed optimum fails the certificate check",
          {{"primal_residual", d(cert.primal_residual)},
           {"primal_negativity", d(cert.primal_negativity)},
           {"dual_residual", d(cert.dual_residual)},
           {"dual_negativity", d(cert.dual_negativity)},
           {"duality_gap", d(cert.duality_gap)},
           {"complementarity", d(cert.complementarity)}});
  }

  if (!opts.run_oracle) return out;
  OracleVerdict<T> verdict;
  try {
    verdict = oracle_solve(lp, Tolerance<T>{std::is_same_v<T, double> ? T(1e-9) : T(0)});
  } catch (const OracleRefused& e) {
    add(FindingCategory::Unverified, e.what());
    return out;
  }
  if (!verdict.methods_agree)
    add(FindingCategory::OracleDisagreement, "simplex and enumeration oracles disagree",
        {{"simplex_value", d(verdict.simplex.value)}, {"enumeration_value", d(verdict.enumeration->value)}});

  const auto& ref = verdict.simplex;
  if (outcome.is_optimal()) {
    const auto& opt = outcome.optimal();
    if (ref.status != OracleStatus::Optimal)
      add(FindingCategory::OracleDisagreement,
          std::string("solver reports Optimal, oracle reports ") + to_string(ref.status),
          {{"objective", d(opt.objective)}});
    else if (!values_agree(opt.objective, ref.value, tol))
      add(FindingCategory::OracleDisagreement, "optimal value differs from oracle",
          {{"objective", d(opt.objective)}, {"oracle_value", d(ref.value)}});
  } else if (ref.status == OracleStatus::Optimal) {
    add(FindingCategory::OracleDisagreement, "solver reports NoSolution, oracle finds an optimum",
        {{"oracle_value", d(ref.value)}});
  }
  return out;
}

}  // namespace cgjlp
