// Command-line front end: solve one problem file or run the seeded random suite.

#include "cgjlp/cgjlp.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace cgjlp;

enum Exit : int {
  kSolved = 0,
  kNoSolution = 1,
  kFindings = 2,
  kBreakdown = 3,
  kUsage = 64,
};

struct Options {
  std::string input;
  std::optional<std::string> format;
  std::string arithmetic = "float";
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::string trace = "columns";
  bool oracle_check = false;
  std::optional<std::size_t> random_count;
  std::uint64_t seed = 42;
  std::size_t kmax = 5;
  std::size_t nmax = 5;
  std::string out;
  std::string precision = "fixed";
};

template <Scalar T>
std::string fmt(const T& v, bool full) {
  return full ? format_full(v) : format_fixed(v);
}

template <Scalar T>
std::string vec(const std::vector<T>& v, bool full) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], full);
  return s + ")";
}

bool write_findings(const std::string& path, const std::vector<Finding>& findings) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot write " << path << '\n';
    return false;
  }
  os << to_jsonl(findings);
  return true;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.arithmetic = o.arithmetic == "rational" ? Arithmetic::Rational : Arithmetic::Float;
  cfg.epsilon = o.tol;
  cfg.max_iterations = o.max_iter;
  cfg.trace_level = o.trace == "tableaux" ? TraceLevel::Tableaux
                    : o.trace == "none"   ? TraceLevel::None
                                          : TraceLevel::Columns;
  return cfg;
}

template <Scalar T>
int solve_file(const Options& o, const ExactProblem& exact) {
  const bool full = o.precision == "full";
  const auto gp = convert_problem<T>(exact);
  const auto np = normalize(gp);
  const auto cfg = solver_config(o);
  const auto outcome = solve(np.lp, cfg);

  if (cfg.trace_level == TraceLevel::Tableaux) {
    for (const auto& snap : outcome.trace.snapshots) {
      std::cout << (snap.label == "initial" ? std::string("[M q]") : snap.label) << '\n'
                << dump_matrix(snap.tableau, full) << '\n';
    }
  }

  std::cout << "status: " << to_string(outcome.kind()) << '\n';
  if (outcome.is_optimal()) {
    const auto& opt = outcome.optimal();
    std::cout << "x = " << vec(fold_back(opt.x, np.map), full) << '\n';
    std::cout << "y = " << vec(fold_duals(opt.y, np.map), full) << '\n';
    std::cout << "objective: " << fmt(fold_objective(opt.objective, np.map), full) << '\n';
  } else if (outcome.kind() == OutcomeKind::Breakdown) {
    const auto& b = outcome.breakdown();
    std::cout << "breakdown: " << to_string(b.reason) << ": " << b.detail << '\n';
  }
  std::cout << "iterations: " << outcome.trace.iterations() << '\n';
  if (cfg.trace_level != TraceLevel::None) std::cout << format_trace_table(outcome.trace);

  std::vector<Finding> findings;
  if (o.oracle_check) {
    CrossCheckOptions cc;
    cc.instance = o.input;
    findings = cross_check(np.lp, outcome, cc);
    std::cout << "findings: " << findings.size() << '\n';
    for (const auto& f : findings) std::cout << "  " << to_string(f.category) << ": " << f.details << '\n';
  }
  if (!o.out.empty() && !write_findings(o.out, findings)) return kUsage;

  if (outcome.kind() == OutcomeKind::Breakdown) return kBreakdown;
  if (!findings.empty() || outcome.kind() == OutcomeKind::IterationLimit) return kFindings;
  return outcome.is_optimal() ? kSolved : kNoSolution;
}

template <Scalar T>
int random_suite(const Options& o) {
  SuiteOptions so;
  so.count = *o.random_count;
  so.seed = o.seed;
  so.spec.kmax = o.kmax;
  so.spec.nmax = o.nmax;
  so.oracle_check = o.oracle_check;
  so.solver = solver_config(o);
  const auto rep = run_random_suite<T>(so);
  std::cout << rep.summary();
  if (o.out.empty())
    std::cout << to_jsonl(rep.findings);
  else if (!write_findings(o.out, rep.findings))
    return kUsage;
  return rep.findings.empty() ? kSolved : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complementary Gauss-Jordan pivoting LP solver"};
  Options o;
  app.add_option("--input", o.input, "Problem file (.json or paper-text)");
  app.add_option("--format", o.format, "Input format (default: by extension)")
      ->check(CLI::IsMember({"json", "paper-text"}));
  app.add_option("--arithmetic", o.arithmetic, "float or rational")->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--tol", o.tol, "Zero tolerance (default 1e-9; exact in rational mode)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-iter", o.max_iter, "Iteration limit (default k+n)")->check(CLI::PositiveNumber);
  app.add_option("--trace", o.trace, "columns, tableaux or none")
      ->check(CLI::IsMember({"columns", "tableaux", "none"}));
  app.add_flag("--oracle-check", o.oracle_check, "Cross-check against the reference solvers");
  auto* suite = app.add_option("--random-suite", o.random_count, "Run COUNT seeded random instances");
  app.add_option("--seed", o.seed, "Base seed; instance i uses seed+i")->needs(suite);
  app.add_option("--kmax", o.kmax, "Largest constraint count")->needs(suite)->check(CLI::Range(2, 9));
  app.add_option("--nmax", o.nmax, "Largest variable count")->needs(suite)->check(CLI::Range(2, 9));
  app.add_option("--out", o.out, "Findings file (JSON lines)");
  app.add_option("--precision", o.precision, "fixed (4 decimals) or full")
      ->check(CLI::IsMember({"fixed", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (o.random_count.has_value() == !o.input.empty()) {
    std::cerr << "error: give exactly one of --input or --random-suite\n";
    return kUsage;
  }

  const bool rational = o.arithmetic == "rational";
  try {
    if (o.random_count) return rational ? random_suite<Rational>(o) : random_suite<double>(o);

    std::optional<InputFormat> format;
    if (o.format) format = *o.format == "json" ? InputFormat::Json : InputFormat::PaperText;
    const auto pf = load_problem(o.input, format);
    return rational ? solve_file<Rational>(o, pf.problem) : solve_file<double>(o, pf.problem);
  } catch (const ParseError& e) {
    std::cerr << o.input << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid problem: " << e.what() << '\n';
    return kUsage;
  }
}
