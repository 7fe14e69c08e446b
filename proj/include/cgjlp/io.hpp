#pragma once

#include "cgjlp/lp_model.hpp"
#include "cgjlp/scalar.hpp"

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cgjlp {

/// Parse failure with a position: line/column for text, a field path for JSON.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  ParseError(const std::string& path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(path) {}

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
  std::string path_;
};

enum class InputFormat { Json, PaperText };

inline const char* to_string(InputFormat f) { return f == InputFormat::Json ? "json" : "paper-text"; }

/// ".json" selects JSON, anything else the paper-text layout.
inline InputFormat format_from_extension(const std::filesystem::path& p) {
  return p.extension() == ".json" ? InputFormat::Json : InputFormat::PaperText;
}

/// Problems are parsed exactly; convert_problem<double> gives the float view.
using ExactProblem = GeneralProblem<Rational>;

struct ProblemFile {
  InputFormat format = InputFormat::PaperText;
  ExactProblem problem;
  std::filesystem::path source;
};

// ---------------------------------------------------------------------------
// paper-text
//
//   # comment
//   sense: max            (optional, default max)
//   free: 2 3             (optional, 1-based variable indices)
//   2 7 6 4               objective row, optional trailing "|"
//   1 1 0.83 0.5 | 65     constraint: coefficients | [<=|>=|=] rhs
//
// Numbers may be integers, decimals, exponents or p/q.

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',') ++i;
    out.push_back({line.substr(start, i - start), offset + start + 1});
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<Relation> relation_from(std::string_view s) {
  if (s == "<=" || s == "≤") return Relation::LessEqual;
  if (s == ">=" || s == "≥") return Relation::GreaterEqual;
  if (s == "=" || s == "==") return Relation::Equal;
  return std::nullopt;
}

inline const char* relation_text(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

inline Rational number_at(const Token& t, std::size_t line) {
  try {
    return parse_rational(t.text);
  } catch (const NumberFormatError&) {
    throw ParseError(line, t.column, "not a number: '" + std::string(t.text) + "'");
  }
}

/// Exact text that parse_rational reads back to the same value.
inline std::string exact_token(const Rational& v) { return v.str(); }

}  // namespace detail

inline ExactProblem parse_paper_text(std::string_view text) {
  ExactProblem gp;
  bool have_objective = false;
  std::optional<std::pair<std::size_t, std::vector<std::size_t>>> free_spec;  // line, indices
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());

    if (auto colon = line.find(':'); colon != std::string_view::npos) {
      std::string_view key = detail::trim(line.substr(0, colon));
      std::string_view value = detail::trim(line.substr(colon + 1));
      const std::size_t vcol = indent + static_cast<std::size_t>(value.data() - line.data()) + 1;
      if (have_objective) throw ParseError(lineno, indent + 1, "header '" + std::string(key) + "' after the objective row");
      if (key == "sense") {
        if (value == "max")
          gp.sense = Sense::Maximize;
        else if (value == "min")
          gp.sense = Sense::Minimize;
        else
          throw ParseError(lineno, vcol, "sense must be 'max' or 'min'");
      } else if (key == "free") {
        std::vector<std::size_t> idx;
        for (const auto& t : detail::tokenize(value, vcol - 1)) {
          std::size_t v = 0;
          auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
          if (ec != std::errc{} || p != t.text.data() + t.text.size() || v == 0)
            throw ParseError(lineno, t.column, "free variable index must be a positive integer");
          idx.push_back(v);
        }
        free_spec = {lineno, std::move(idx)};
      } else {
        throw ParseError(lineno, indent + 1, "unknown header '" + std::string(key) + "'");
      }
      continue;
    }

    const std::size_t bar = line.find('|');
    if (bar != std::string_view::npos && line.find('|', bar + 1) != std::string_view::npos)
      throw ParseError(lineno, indent + line.find('|', bar + 1) + 1, "ragged row: more than one '|'");
    std::string_view lhs = bar == std::string_view::npos ? line : line.substr(0, bar);
    const auto coeff_tokens = detail::tokenize(lhs, indent);
    std::vector<Rational> coeffs;
    for (const auto& t : coeff_tokens) coeffs.push_back(detail::number_at(t, lineno));

    if (!have_objective) {
      if (bar != std::string_view::npos && !detail::trim(line.substr(bar + 1)).empty())
        throw ParseError(lineno, indent + bar + 1, "ragged row: objective row has entries after '|'");
      if (coeffs.empty()) throw ParseError(lineno, indent + 1, "objective row is empty");
      gp.objective = std::move(coeffs);
      have_objective = true;
      continue;
    }

    if (bar == std::string_view::npos)
      throw ParseError(lineno, indent + line.size() + 1, "constraint row needs '| rhs'");
    if (coeffs.size() != gp.objective.size())
      throw ParseError(lineno, indent + 1,
                       "ragged row: " + std::to_string(coeffs.size()) + " coefficients, expected " +
                           std::to_string(gp.objective.size()));
    auto rhs_tokens = detail::tokenize(line.substr(bar + 1), indent + bar + 1);
    Constraint<Rational> c;
    c.coeffs = std::move(coeffs);
    std::size_t t = 0;
    if (!rhs_tokens.empty()) {
      if (auto rel = detail::relation_from(rhs_tokens[0].text)) {
        c.relation = *rel;
        t = 1;
      }
    }
    if (rhs_tokens.size() != t + 1) {
      const std::size_t col = rhs_tokens.size() > t + 1 ? rhs_tokens[t + 1].column : indent + line.size() + 1;
      throw ParseError(lineno, col, "expected exactly one right-hand side after '|'");
    }
    c.rhs = detail::number_at(rhs_tokens[t], lineno);
    gp.constraints.push_back(std::move(c));
  }

  if (!have_objective) throw ParseError(lineno == 0 ? 1 : lineno, 1, "missing objective row");
  if (gp.constraints.empty()) throw ParseError(lineno, 1, "no constraint rows");
  if (free_spec) {
    gp.domains.assign(gp.objective.size(), Domain::NonNegative);
    for (std::size_t v : free_spec->second) {
      if (v > gp.objective.size())
        throw ParseError(free_spec->first, 1, "free variable index " + std::to_string(v) + " out of range");
      gp.domains[v - 1] = Domain::Free;
    }
  }
  return gp;
}

inline std::string to_paper_text(const ExactProblem& gp) {
  std::ostringstream os;
  os << "sense: " << (gp.sense == Sense::Maximize ? "max" : "min") << '\n';
  bool any_free = false;
  for (std::size_t j = 0; j < gp.domains.size(); ++j) any_free |= gp.domains[j] == Domain::Free;
  if (any_free) {
    os << "free:";
    for (std::size_t j = 0; j < gp.domains.size(); ++j)
      if (gp.domains[j] == Domain::Free) os << ' ' << j + 1;
    os << '\n';
  }
  for (std::size_t j = 0; j < gp.objective.size(); ++j) os << (j ? " " : "") << detail::exact_token(gp.objective[j]);
  os << " |\n";
  for (const auto& c : gp.constraints) {
    for (std::size_t j = 0; j < c.coeffs.size(); ++j) os << (j ? " " : "") << detail::exact_token(c.coeffs[j]);
    os << " | " << detail::relation_text(c.relation) << ' ' << detail::exact_token(c.rhs) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON
//
//   {"sense": "max", "objective": [...],
//    "constraints": [{"coeffs": [...], "op": "<=", "rhs": 10}, ...],
//    "variables": ["nonneg", "free", ...]}          (optional)
//
// Numbers may be JSON numbers or strings ("1/3", "0.83").

namespace detail {

inline Rational json_number(const nlohmann::json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) {
      if (v.is_number_unsigned()) return Rational{v.get<std::uint64_t>()};
      return Rational{v.get<std::int64_t>()};
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ParseError(path, "non-finite number");
      return parse_rational(shortest_decimal(d));
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const NumberFormatError& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a number or numeric string");
}

inline std::vector<Rational> json_numbers(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(json_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline nlohmann::ordered_json json_value(const Rational& v) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(v) == 1) {
    const auto num = numerator(v);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max())
      return num.convert_to<std::int64_t>();
  }
  return v.str();
}

}  // namespace detail

inline ExactProblem parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  for (const auto& [key, _] : doc.items())
    if (key != "sense" && key != "objective" && key != "constraints" && key != "variables")
      throw ParseError("$." + key, "unknown field");

  ExactProblem gp;
  if (doc.contains("sense")) {
    const auto& s = doc["sense"];
    if (s == "max")
      gp.sense = Sense::Maximize;
    else if (s == "min")
      gp.sense = Sense::Minimize;
    else
      throw ParseError("$.sense", "must be \"max\" or \"min\"");
  }
  if (!doc.contains("objective")) throw ParseError("$.objective", "missing");
  gp.objective = detail::json_numbers(doc["objective"], "$.objective");
  if (gp.objective.empty()) throw ParseError("$.objective", "must not be empty");

  if (!doc.contains("constraints")) throw ParseError("$.constraints", "missing");
  const auto& cons = doc["constraints"];
  if (!cons.is_array()) throw ParseError("$.constraints", "expected an array");
  if (cons.empty()) throw ParseError("$.constraints", "must not be empty");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string path = "$.constraints[" + std::to_string(i) + "]";
    const auto& c = cons[i];
    if (!c.is_object()) throw ParseError(path, "expected an object");
    for (const auto& [key, _] : c.items())
      if (key != "coeffs" && key != "op" && key != "rhs") throw ParseError(path + "." + key, "unknown field");
    if (!c.contains("coeffs")) throw ParseError(path + ".coeffs", "missing");
    if (!c.contains("rhs")) throw ParseError(path + ".rhs", "missing");
    Constraint<Rational> con;
    con.coeffs = detail::json_numbers(c["coeffs"], path + ".coeffs");
    if (con.coeffs.size() != gp.objective.size())
      throw ParseError(path + ".coeffs", "has " + std::to_string(con.coeffs.size()) + " entries, expected " +
                                             std::to_string(gp.objective.size()));
    if (c.contains("op")) {
      if (!c["op"].is_string()) throw ParseError(path + ".op", "expected a string");
      auto rel = detail::relation_from(c["op"].get<std::string>());
      if (!rel) throw ParseError(path + ".op", "must be \"<=\", \">=\" or \"=\"");
      con.relation = *rel;
    }
    con.rhs = detail::json_number(c["rhs"], path + ".rhs");
    gp.constraints.push_back(std::move(con));
  }

  if (doc.contains("variables")) {
    const auto& vars = doc["variables"];
    if (!vars.is_array()) throw ParseError("$.variables", "expected an array");
    if (vars.size() != gp.objective.size())
      throw ParseError("$.variables", "has " + std::to_string(vars.size()) + " entries, expected " +
                                          std::to_string(gp.objective.size()));
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto& v = vars[j];
      if (v == "nonneg")
        gp.domains.push_back(Domain::NonNegative);
      else if (v == "free")
        gp.domains.push_back(Domain::Free);
      else
        throw ParseError("$.variables[" + std::to_string(j) + "]", "must be \"nonneg\" or \"free\"");
    }
  }
  return gp;
}

inline std::string to_json(const ExactProblem& gp) {
  nlohmann::ordered_json doc;
  doc["sense"] = gp.sense == Sense::Maximize ? "max" : "min";
  doc["objective"] = nlohmann::ordered_json::array();
  for (const auto& v : gp.objective) doc["objective"].push_back(detail::json_value(v));
  doc["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : gp.constraints) {
    nlohmann::ordered_json jc;
    jc["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& v : c.coeffs) jc["coeffs"].push_back(detail::json_value(v));
    jc["op"] = detail::relation_text(c.relation);
    jc["rhs"] = detail::json_value(c.rhs);
    doc["constraints"].push_back(std::move(jc));
  }
  if (!gp.domains.empty()) {
    doc["variables"] = nlohmann::ordered_json::array();
    for (auto d : gp.domains) doc["variables"].push_back(d == Domain::Free ? "free" : "nonneg");
  }
  return doc.dump(2) + "\n";
}

inline ExactProblem parse_problem(std::string_view text, InputFormat format) {
  return format == InputFormat::Json ? parse_json(text) : parse_paper_text(text);
}

inline std::string serialize_problem(const ExactProblem& gp, InputFormat format) {
  return format == InputFormat::Json ? to_json(gp) : to_paper_text(gp);
}

inline ProblemFile load_problem(const std::filesystem::path& path, std::optional<InputFormat> format = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  ProblemFile pf;
  pf.source = path;
  pf.format = format.value_or(format_from_extension(path));
  pf.problem = parse_problem(ss.str(), pf.format);
  pf.problem.validate();
  return pf;
}

}  // namespace cgjlp
