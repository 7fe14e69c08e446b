#pragma once

#include "cgjlp/lp_model.hpp"
#include "cgjlp/matrix.hpp"
#include "cgjlp/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgjlp {

class PivotError : public std::runtime_error {
 public:
  enum class Kind { ZeroPivot, NotFixable };
  PivotError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Which of the two pivoting instances of an iteration a pivot belongs to.
enum class Instance { MinorP, MajorP };

/// Phase label of a logged pivot. Finalize marks a Step-4 pivot.
enum class Phase { MinorP, MajorP, Finalize };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::MinorP: return "MinorP";
    case Phase::MajorP: return "MajorP";
    case Phase::Finalize: return "Finalize";
  }
  return "?";
}

inline const char* to_string(Instance i) { return i == Instance::MinorP ? "MinorP" : "MajorP"; }

struct PivotRecord {
  std::size_t iteration = 0;  // 1-based iteration the pivot belongs to
  Phase phase = Phase::MinorP;
  Instance instance = Instance::MinorP;
  std::size_t column = 0;     // 0-based
  std::size_t pivot_row = 0;  // 0-based
  int pre_q_last_sign = 0;
  bool row_fixed = false;
  bool reversal = false;  // column is the complement of an earlier MajorP selection

  bool operator==(const PivotRecord&) const = default;
};

enum class StopStatus { Continue, Solved, NoSolution };

inline const char* to_string(StopStatus s) {
  switch (s) {
    case StopStatus::Continue: return "Continue";
    case StopStatus::Solved: return "Solved";
    case StopStatus::NoSolution: return "NoSolution";
  }
  return "?";
}

/// Column j and column j+(k+n) form a complementary pair; both pivot in row j.
inline std::size_t complement_column(std::size_t j, std::size_t pairs) {
  if (j >= 2 * pairs) throw std::out_of_range("column index " + std::to_string(j) + " out of range");
  return j < pairs ? j + pairs : j - pairs;
}

inline std::size_t complement_row(std::size_t j, std::size_t pairs) {
  if (j >= 2 * pairs) throw std::out_of_range("column index " + std::to_string(j) + " out of range");
  return j < pairs ? j : j - pairs;
}

/// The live augmented matrix [M q] plus basis bookkeeping.
template <Scalar T>
class EqTableau {
 public:
  EqTableau(Matrix<T> data, std::size_t k, std::size_t n, Tolerance<T> tol)
      : data_(std::move(data)), k_(k), n_(n), tol_(tol) {
    const std::size_t N = k + n;
    if (data_.rows() != N + 1 || data_.cols() != 2 * N + 1)
      throw ValidationError("tableau shape does not match k+n");
    basic_of_row_.resize(N);
    for (std::size_t i = 0; i < N; ++i) basic_of_row_[i] = N + i;
  }

  [[nodiscard]] std::size_t k() const { return k_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t pairs() const { return k_ + n_; }
  [[nodiscard]] std::size_t rows() const { return data_.rows(); }
  [[nodiscard]] std::size_t columns() const { return 2 * pairs(); }
  [[nodiscard]] std::size_t last_row() const { return pairs(); }
  [[nodiscard]] std::size_t rhs_column() const { return columns(); }

  [[nodiscard]] const T& m(std::size_t r, std::size_t c) const { return data_(r, c); }
  [[nodiscard]] const T& q(std::size_t r) const { return data_(r, rhs_column()); }
  [[nodiscard]] const Matrix<T>& matrix() const { return data_; }
  Matrix<T>& mutable_matrix() { return data_; }
  [[nodiscard]] const Tolerance<T>& tolerance() const { return tol_; }

  [[nodiscard]] const std::vector<std::size_t>& basic_of_row() const { return basic_of_row_; }
  void set_basic(std::size_t row, std::size_t col) { basic_of_row_[row] = col; }
  [[nodiscard]] bool is_basic(std::size_t col) const {
    return basic_of_row_[complement_row(col, pairs())] == col;
  }

  [[nodiscard]] const std::vector<std::size_t>& majorp_history() const { return majorp_history_; }
  [[nodiscard]] bool in_majorp_history(std::size_t col) const {
    return std::find(majorp_history_.begin(), majorp_history_.end(), col) != majorp_history_.end();
  }
  void add_majorp_selection(std::size_t col) {
    if (!in_majorp_history(col)) majorp_history_.push_back(col);
  }

  /// Virtual orientation of the last row (+1 as stored, -1 read negated).
  [[nodiscard]] int last_row_sign() const { return last_row_negated_ ? -1 : 1; }
  void set_last_row_sign(int s) { last_row_negated_ = s < 0; }

  [[nodiscard]] const std::vector<PivotRecord>& pivot_log() const { return pivot_log_; }
  void log(const PivotRecord& rec) { pivot_log_.push_back(rec); }

 private:
  Matrix<T> data_;
  std::size_t k_;
  std::size_t n_;
  Tolerance<T> tol_;
  std::vector<std::size_t> basic_of_row_;
  std::vector<std::size_t> majorp_history_;
  bool last_row_negated_ = false;
  std::vector<PivotRecord> pivot_log_;
};

/// Adds the last row of [M q] to every other row.
template <Scalar T>
EqTableau<T> initialize(const EqSystem<T>& eq, Tolerance<T> tol = {}) {
  const std::size_t N = eq.pairs();
  Matrix<T> t(N + 1, 2 * N + 1);
  for (std::size_t r = 0; r <= N; ++r) {
    for (std::size_t c = 0; c < 2 * N; ++c) t(r, c) = eq.M(r, c);
    t(r, 2 * N) = eq.q[r];
  }
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c <= 2 * N; ++c) t(r, c) += t(N, c);
  return EqTableau<T>(std::move(t), eq.k, eq.n, tol);
}

/// Gauss-Jordan pivot at (row, col). The pivot column becomes exactly the unit
/// vector for `row`; `row` becomes basic in `col`.
template <Scalar T>
void gj_pivot(EqTableau<T>& tab, std::size_t row, std::size_t col, PivotRecord rec = {}) {
  auto& t = tab.mutable_matrix();
  const auto& tol = tab.tolerance();
  if (row >= tab.pairs() || col >= tab.columns())
    throw std::out_of_range("pivot position out of range");
  const T pivot = t(row, col);
  if (tol.is_zero(pivot))
    throw PivotError(PivotError::Kind::ZeroPivot,
                     "zero pivot at (" + std::to_string(row + 1) + "," + std::to_string(col + 1) + ")");
  rec.column = col;
  rec.pivot_row = row;
  rec.pre_q_last_sign = tol.sign(tab.q(tab.last_row()));

  auto prow = t.row(row);
  for (auto& v : prow) v /= pivot;
  prow[col] = T{1};
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r == row) continue;
    auto cur = t.row(r);
    const T factor = cur[col];
    if (factor == 0) continue;
    for (std::size_t c = 0; c < cur.size(); ++c)
      if (prow[c] != 0) cur[c] -= factor * prow[c];
    cur[col] = T{0};
  }
  tab.set_basic(row, col);
  tab.log(rec);
}

/// Adds the last row to the complementary pivot row of `col` when that row's
/// entry is zero. Returns false (and leaves the tableau alone) if the entry is
/// already usable.
template <Scalar T>
bool row_fix_for_pivot(EqTableau<T>& tab, std::size_t col) {
  const std::size_t r = complement_row(col, tab.pairs());
  const auto& tol = tab.tolerance();
  if (!tol.is_zero(tab.m(r, col))) return false;
  const std::size_t last = tab.last_row();
  if (tol.is_zero(tab.m(last, col)))
    throw PivotError(PivotError::Kind::NotFixable,
                     "column " + std::to_string(col + 1) + " has zero pivot and zero last-row entry");
  auto& t = tab.mutable_matrix();
  auto dst = t.row(r);
  auto src = t.row(last);
  for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
  return true;
}

/// Pivot at (complement_row(col), col), repairing a zero pivot first.
template <Scalar T>
void complementary_pivot(EqTableau<T>& tab, std::size_t col, PivotRecord rec = {}) {
  const std::size_t r = complement_row(col, tab.pairs());
  try {
    rec.row_fixed = row_fix_for_pivot(tab, col);
  } catch (const PivotError& e) {
    throw PivotError(PivotError::Kind::ZeroPivot, e.what());
  }
  gj_pivot(tab, r, col, rec);
}

/// Solved: q_i >= 0 for i <= k+n and q_{k+n+1} = 0.
/// NoSolution: with the last row oriented so that q_{k+n+1} > 0, every other
/// entry of that row is <= 0.
template <Scalar T>
StopStatus check_stop(const EqTableau<T>& tab) {
  const auto& tol = tab.tolerance();
  const std::size_t last = tab.last_row();
  bool nonneg = true;
  for (std::size_t i = 0; i < tab.pairs(); ++i)
    if (tol.is_negative(tab.q(i))) nonneg = false;
  const int s = tol.sign(tab.q(last));
  if (nonneg && s == 0) return StopStatus::Solved;
  if (s != 0) {
    bool all_nonpositive = true;
    for (std::size_t c = 0; c < tab.columns() && all_nonpositive; ++c)
      if (tol.is_positive(s > 0 ? tab.m(last, c) : T(-tab.m(last, c)))) all_nonpositive = false;
    if (all_nonpositive) return StopStatus::NoSolution;
  }
  return StopStatus::Continue;
}

template <Scalar T>
struct Claim4Ratios {
  std::vector<std::size_t> rows;
  std::vector<T> ratios;
  std::vector<std::size_t> skipped_rows;  // q_i != 0 but both last-row entries zero

  [[nodiscard]] bool empty() const { return ratios.empty(); }

  /// All ratios share a strict sign.
  [[nodiscard]] bool same_sign() const {
    bool pos = false, neg = false;
    for (const auto& r : ratios) (r > 0 ? pos : neg) = true;
    return !(pos && neg);
  }

  /// All ratios equal: exactly for rationals, within `rel` relative otherwise.
  [[nodiscard]] bool all_equal(double rel = 1e-9) const {
    for (std::size_t i = 1; i < ratios.size(); ++i) {
      if constexpr (std::is_same_v<T, double>) {
        double a = ratios[0], b = ratios[i];
        if (std::fabs(a - b) > rel * std::max(std::fabs(a), std::fabs(b))) return false;
      } else {
        if (ratios[i] != ratios[0]) return false;
      }
    }
    return true;
  }
};

/// For each row with q_i != 0: m_{last,i}/q_i, or m_{last,k+n+i}/q_i when
/// m_{last,i} is zero. Uses the stored (un-oriented) last row.
template <Scalar T>
Claim4Ratios<T> claim4_ratios(const EqTableau<T>& tab) {
  Claim4Ratios<T> out;
  const auto& tol = tab.tolerance();
  const std::size_t last = tab.last_row(), N = tab.pairs();
  for (std::size_t i = 0; i < N; ++i) {
    const T& qi = tab.q(i);
    if (tol.is_zero(qi)) continue;
    const T* a = &tab.m(last, i);
    if (tol.is_zero(*a)) a = &tab.m(last, N + i);
    if (tol.is_zero(*a)) {
      out.skipped_rows.push_back(i);
      continue;
    }
    out.rows.push_back(i);
    out.ratios.push_back(*a / qi);
  }
  return out;
}

/// Plain-text dump: one row per line, fixed 4 decimals (or full precision).
template <Scalar T>
std::string dump_matrix(const Matrix<T>& t, bool full_precision = false) {
  std::ostringstream os;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (c) os << ' ';
      std::string cell = full_precision ? format_full(t(r, c)) : format_fixed(t(r, c));
      if (!full_precision && cell.size() < 10) cell.insert(0, 10 - cell.size(), ' ');
      os << cell;
    }
    os << '\n';
  }
  return os.str();
}

template <Scalar T>
std::string dump_tableau(const EqTableau<T>& tab, bool full_precision = false) {
  return dump_matrix(tab.matrix(), full_precision);
}

}  // namespace cgjlp
