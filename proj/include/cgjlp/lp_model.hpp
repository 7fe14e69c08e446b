#pragma once

#include "cgjlp/matrix.hpp"
#include "cgjlp/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgjlp {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Domain { NonNegative, Free };

template <Scalar T>
struct Constraint {
  std::vector<T> coeffs;
  Relation relation = Relation::LessEqual;
  T rhs{};

  bool operator==(const Constraint&) const = default;
};

/// An LP as the user wrote it: either sense, mixed relations, free variables.
template <Scalar T>
struct GeneralProblem {
  Sense sense = Sense::Maximize;
  std::vector<T> objective;
  std::vector<Constraint<T>> constraints;
  std::vector<Domain> domains;  // empty means all nonnegative

  [[nodiscard]] std::size_t num_vars() const { return objective.size(); }
  [[nodiscard]] Domain domain(std::size_t j) const {
    return domains.empty() ? Domain::NonNegative : domains[j];
  }

  void validate() const {
    if (objective.empty()) throw ValidationError("problem has no variables");
    if (constraints.empty()) throw ValidationError("problem has no constraints");
    if (!domains.empty() && domains.size() != objective.size())
      throw ValidationError("variable domain list length does not match objective length");
    for (const auto& v : objective)
      if (!ScalarTraits<T>::finite(v)) throw ValidationError("non-finite objective coefficient");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto& c = constraints[i];
      if (c.coeffs.size() != objective.size())
        throw ValidationError("constraint " + std::to_string(i + 1) + " has " +
                              std::to_string(c.coeffs.size()) + " coefficients, expected " +
                              std::to_string(objective.size()));
      for (const auto& v : c.coeffs)
        if (!ScalarTraits<T>::finite(v))
          throw ValidationError("non-finite coefficient in constraint " + std::to_string(i + 1));
      if (!ScalarTraits<T>::finite(c.rhs))
        throw ValidationError("non-finite rhs in constraint " + std::to_string(i + 1));
    }
  }

  /// An empty domain list equals an all-nonnegative one.
  bool operator==(const GeneralProblem& o) const {
    if (sense != o.sense || objective != o.objective || constraints != o.constraints) return false;
    for (std::size_t j = 0; j < num_vars(); ++j)
      if (domain(j) != o.domain(j)) return false;
    return true;
  }
};

template <Scalar To, Scalar From>
GeneralProblem<To> convert_problem(const GeneralProblem<From>& gp) {
  auto cv = [](const From& v) -> To {
    if constexpr (std::is_same_v<To, From>) {
      return v;
    } else if constexpr (std::is_same_v<To, double>) {
      return ScalarTraits<From>::to_double(v);
    } else {
      return parse_rational(shortest_decimal(v));
    }
  };
  GeneralProblem<To> out;
  out.sense = gp.sense;
  out.domains = gp.domains;
  for (const auto& v : gp.objective) out.objective.push_back(cv(v));
  for (const auto& c : gp.constraints) {
    Constraint<To> cc;
    cc.relation = c.relation;
    cc.rhs = cv(c.rhs);
    for (const auto& v : c.coeffs) cc.coeffs.push_back(cv(v));
    out.constraints.push_back(std::move(cc));
  }
  return out;
}

/// Symmetric form: maximize f'x subject to Ax <= b, x >= 0.
template <Scalar T>
struct LinearProgram {
  std::vector<T> f;
  Matrix<T> A;
  std::vector<T> b;

  LinearProgram() = default;
  LinearProgram(std::vector<T> f_, Matrix<T> A_, std::vector<T> b_)
      : f(std::move(f_)), A(std::move(A_)), b(std::move(b_)) {
    validate();
  }

  /// Row-list convenience constructor.
  LinearProgram(std::vector<T> f_, const std::vector<std::vector<T>>& rows, std::vector<T> b_)
      : f(std::move(f_)), b(std::move(b_)) {
    A = Matrix<T>(rows.size(), f.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != f.size())
        throw ValidationError("row " + std::to_string(i + 1) + " of A has wrong length");
      for (std::size_t j = 0; j < f.size(); ++j) A(i, j) = rows[i][j];
    }
    validate();
  }

  [[nodiscard]] std::size_t k() const { return b.size(); }
  [[nodiscard]] std::size_t n() const { return f.size(); }

  void validate() const {
    if (f.empty()) throw ValidationError("LP needs at least one variable");
    if (b.empty()) throw ValidationError("LP needs at least one constraint");
    if (A.rows() != b.size() || A.cols() != f.size())
      throw ValidationError("LP dimensions inconsistent: A is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", b has " + std::to_string(b.size()) +
                            ", f has " + std::to_string(f.size()));
    auto finite = [](const T& v) { return ScalarTraits<T>::finite(v); };
    for (const auto& v : f)
      if (!finite(v)) throw ValidationError("non-finite objective entry");
    for (const auto& v : b)
      if (!finite(v)) throw ValidationError("non-finite rhs entry");
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (const auto& v : A.row(i))
        if (!finite(v)) throw ValidationError("non-finite matrix entry");
  }

  bool operator==(const LinearProgram&) const = default;
};

/// The primal-dual system M z = q with z = (y, x, slack_primal, slack_dual).
///
/// Rows 0..k-1:      [ 0   | A | I_k | 0   ]  q = b
/// Rows k..k+n-1:    [ -A' | 0 | 0   | I_n ]  q = -f
/// Row k+n:          [ -b' | f'| 0   | 0   ]  q = 0
template <Scalar T>
struct EqSystem {
  Matrix<T> M;
  std::vector<T> q;
  std::size_t k = 0;
  std::size_t n = 0;

  [[nodiscard]] std::size_t pairs() const { return k + n; }
};

template <Scalar T>
EqSystem<T> build_eq(const LinearProgram<T>& lp) {
  lp.validate();
  const std::size_t k = lp.k(), n = lp.n(), N = k + n;
  EqSystem<T> eq{Matrix<T>(N + 1, 2 * N), std::vector<T>(N + 1), k, n};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      eq.M(i, k + j) = lp.A(i, j);
      eq.M(k + j, i) = -lp.A(i, j);
    }
    eq.M(i, N + i) = T{1};
    eq.M(N, i) = -lp.b[i];
    eq.q[i] = lp.b[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    eq.M(k + j, N + k + j) = T{1};
    eq.M(N, k + j) = lp.f[j];
    eq.q[k + j] = -lp.f[j];
  }
  return eq;
}

/// True when columns 0..k+n-1 of M with q appended as a final column form a
/// skew-symmetric (k+n+1)x(k+n+1) matrix.
template <Scalar T>
bool is_skew_symmetric_core(const EqSystem<T>& eq) {
  const std::size_t N = eq.pairs();
  auto at = [&](std::size_t r, std::size_t c) -> const T& { return c < N ? eq.M(r, c) : eq.q[r]; };
  for (std::size_t r = 0; r <= N; ++r)
    for (std::size_t c = 0; c <= N; ++c)
      if (at(r, c) != -at(c, r)) return false;
  return true;
}

/// How a normalized problem relates back to the original one.
struct NormalizationMap {
  Sense sense = Sense::Maximize;
  std::size_t original_vars = 0;
  std::size_t normalized_vars = 0;
  std::vector<std::size_t> positive_part;                // original var -> column
  std::vector<std::optional<std::size_t>> negative_part;  // free vars only
  struct RowOrigin {
    std::size_t constraint;
    int sign;  // +1 kept, -1 negated
  };
  std::vector<RowOrigin> row_origin;
  std::size_t original_constraints = 0;

  [[nodiscard]] bool is_identity() const {
    if (sense != Sense::Maximize || normalized_vars != original_vars) return false;
    if (row_origin.size() != original_constraints) return false;
    for (std::size_t i = 0; i < row_origin.size(); ++i)
      if (row_origin[i].constraint != i || row_origin[i].sign != 1) return false;
    return true;
  }
};

template <Scalar T>
struct NormalizedProblem {
  LinearProgram<T> lp;
  NormalizationMap map;
};

/// Rewrites a general problem into symmetric form. Row order is preserved;
/// an equality becomes the adjacent pair (row, -row); a >= row is negated;
/// a free variable x = u - v gets its v column appended after all originals.
template <Scalar T>
NormalizedProblem<T> normalize(const GeneralProblem<T>& gp) {
  gp.validate();
  NormalizationMap map;
  map.sense = gp.sense;
  map.original_vars = gp.num_vars();
  map.original_constraints = gp.constraints.size();

  std::size_t next = gp.num_vars();
  for (std::size_t j = 0; j < gp.num_vars(); ++j) {
    map.positive_part.push_back(j);
    if (gp.domain(j) == Domain::Free)
      map.negative_part.emplace_back(next++);
    else
      map.negative_part.emplace_back(std::nullopt);
  }
  map.normalized_vars = next;

  auto expand = [&](const std::vector<T>& coeffs, int sign) {
    std::vector<T> row(next, T{0});
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      T v = sign > 0 ? coeffs[j] : T(-coeffs[j]);
      row[j] = v;
      if (map.negative_part[j]) row[*map.negative_part[j]] = -v;
    }
    return row;
  };

  std::vector<T> f = expand(gp.objective, gp.sense == Sense::Maximize ? 1 : -1);
  std::vector<std::vector<T>> rows;
  std::vector<T> b;
  for (std::size_t i = 0; i < gp.constraints.size(); ++i) {
    const auto& c = gp.constraints[i];
    auto push = [&](int sign) {
      rows.push_back(expand(c.coeffs, sign));
      b.push_back(sign > 0 ? c.rhs : T(-c.rhs));
      map.row_origin.push_back({i, sign});
    };
    switch (c.relation) {
      case Relation::LessEqual: push(1); break;
      case Relation::GreaterEqual: push(-1); break;
      case Relation::Equal:
        push(1);
        push(-1);
        break;
    }
  }
  return {LinearProgram<T>(std::move(f), rows, std::move(b)), std::move(map)};
}

/// Maps a normalized primal vector back to the original variables.
template <Scalar T>
std::vector<T> fold_back(const std::vector<T>& x, const NormalizationMap& map) {
  if (x.size() != map.normalized_vars)
    throw ValidationError("solution has " + std::to_string(x.size()) + " entries, mapping expects " +
                          std::to_string(map.normalized_vars));
  std::vector<T> out(map.original_vars);
  for (std::size_t j = 0; j < map.original_vars; ++j) {
    out[j] = x[map.positive_part[j]];
    if (map.negative_part[j]) out[j] -= x[*map.negative_part[j]];
  }
  return out;
}

/// Objective value in the original sense.
template <Scalar T>
T fold_objective(const T& normalized_value, const NormalizationMap& map) {
  return map.sense == Sense::Minimize ? T(-normalized_value) : normalized_value;
}

/// Multipliers per original constraint (signed by how each row was derived).
template <Scalar T>
std::vector<T> fold_duals(const std::vector<T>& y, const NormalizationMap& map) {
  if (y.size() != map.row_origin.size())
    throw ValidationError("dual vector length does not match normalized row count");
  std::vector<T> out(map.original_constraints, T{0});
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto& o = map.row_origin[i];
    if (o.sign > 0)
      out[o.constraint] += y[i];
    else
      out[o.constraint] -= y[i];
  }
  return out;
}

/// Image of an original-space point in the normalized space (free variables
/// split into their positive and negative parts).
template <Scalar T>
std::vector<T> lift(const std::vector<T>& x, const NormalizationMap& map) {
  if (x.size() != map.original_vars) throw ValidationError("point has wrong dimension");
  std::vector<T> out(map.normalized_vars, T{0});
  for (std::size_t j = 0; j < map.original_vars; ++j) {
    if (map.negative_part[j] && x[j] < 0)
      out[*map.negative_part[j]] = -x[j];
    else
      out[map.positive_part[j]] = x[j];
  }
  return out;
}

}  // namespace cgjlp
