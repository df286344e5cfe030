#pragma once

// In-memory model, writer and reader for the CPLEX-style LP text format:
//
//   \ comment
//   Minimize
//    <name>: <terms>
//   Subject To
//    <name>: <terms> <= | >= | = <rhs>
//   Bounds
//    <lo> <= <var> <= <hi>  |  <var> = <value>  |  <var> >= <lo>  |  <var> <= <hi>
//   Binary
//    <var> ...
//   General
//    <var> ...
//   End
//
// Terms are written "<coef> <var>" joined by " + " / " - ". Keywords are
// case-insensitive on input; rows may continue across lines.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rbb/errors.hpp"
#include "rbb/udg.hpp"

namespace rbb::lp {

struct Term {
  double coef = 1.0;
  std::string var;

  bool operator==(const Term&) const = default;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  bool operator==(const Row&) const = default;
};

struct Bound {
  std::string var;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool operator==(const Bound&) const = default;
};

struct Model {
  std::vector<std::string> comments;
  bool minimize = true;
  std::string objective_name = "obj";
  std::vector<Term> objective;
  std::vector<Row> rows;
  std::vector<Bound> bounds;
  std::vector<std::string> binaries;
  std::vector<std::string> generals;

  // Distinct variable names over objective, rows, bounds and declarations.
  std::vector<std::string> variables() const {
    std::vector<std::string> vars;
    for (const auto& t : objective) vars.push_back(t.var);
    for (const auto& r : rows)
      for (const auto& t : r.terms) vars.push_back(t.var);
    for (const auto& b : bounds) vars.push_back(b.var);
    vars.insert(vars.end(), binaries.begin(), binaries.end());
    vars.insert(vars.end(), generals.begin(), generals.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  // Rows whose name is `family` or starts with `family` + "_".
  std::size_t rows_in_family(std::string_view family) const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const Row& r) {
      return r.name == family || (r.name.size() > family.size() && r.name.compare(0, family.size(), family) == 0 &&
                                  r.name[family.size()] == '_');
    }));
  }
};

namespace detail {

inline std::string number(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return rbb::detail::format_real(x);
}

inline std::string terms_text(const std::vector<Term>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double c = terms[i].coef;
    if (i > 0) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "- ";
    out += number(std::abs(c)) + " " + terms[i].var;
  }
  return out;
}

inline const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

inline bool is_name(std::string_view tok) {
  if (tok.empty() || !(std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_')) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](unsigned char ch) { return std::isalnum(ch) || ch == '_' || ch == '.'; });
}

inline std::optional<double> as_number(std::string_view tok) {
  const std::string t = lower(tok);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return std::numeric_limits<double>::infinity();
  if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok[0] == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

// Parses "<coef> <var> + <coef> <var> ..." into terms.
inline std::vector<Term> parse_terms(const std::vector<std::string_view>& toks, std::size_t line,
                                     const std::string& field) {
  std::vector<Term> terms;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  bool expect_operand = true;
  for (auto tok : toks) {
    if (tok == "+" || tok == "-") {
      if (!expect_operand && have_coef) throw ParseError(line, field, "dangling coefficient");
      if (tok == "-") sign = -sign;
      expect_operand = true;
      continue;
    }
    if (auto v = as_number(tok)) {
      if (have_coef) throw ParseError(line, field, "two coefficients in a row");
      coef = *v;
      have_coef = true;
      continue;
    }
    if (!is_name(tok)) throw ParseError(line, field, "unexpected token '" + std::string(tok) + "'");
    if (!expect_operand) throw ParseError(line, field, "missing operator before '" + std::string(tok) + "'");
    terms.push_back(Term{sign * coef, std::string(tok)});
    sign = 1.0;
    coef = 1.0;
    have_coef = false;
    expect_operand = false;
  }
  if (have_coef || (expect_operand && !terms.empty())) throw ParseError(line, field, "incomplete expression");
  return terms;
}

}  // namespace detail

inline std::string write(const Model& model) {
  using namespace detail;
  std::ostringstream out;
  for (const auto& c : model.comments) out << "\\ " << c << '\n';
  out << (model.minimize ? "Minimize" : "Maximize") << '\n';
  out << ' ' << model.objective_name << ": " << terms_text(model.objective) << '\n';
  out << "Subject To\n";
  for (const auto& r : model.rows)
    out << ' ' << r.name << ": " << terms_text(r.terms) << ' ' << sense_text(r.sense) << ' ' << number(r.rhs) << '\n';
  if (!model.bounds.empty()) {
    out << "Bounds\n";
    for (const auto& b : model.bounds) {
      if (b.lower == b.upper) out << ' ' << b.var << " = " << number(b.lower) << '\n';
      else out << ' ' << number(b.lower) << " <= " << b.var << " <= " << number(b.upper) << '\n';
    }
  }
  auto declare = [&](const char* header, const std::vector<std::string>& vars) {
    if (vars.empty()) return;
    out << header << '\n';
    for (const auto& v : vars) out << ' ' << v << '\n';
  };
  declare("Binary", model.binaries);
  declare("General", model.generals);
  out << "End\n";
  return out.str();
}

inline Model parse(std::string_view text) {
  using namespace detail;
  enum class Section { Start, Objective, Constraints, Bounds, Binary, General, Done };
  Model model;
  Section section = Section::Start;

  struct Pending {
    std::size_t line = 0;
    std::string name;
    std::vector<std::string> tokens;
  };
  std::optional<Pending> pending;
  bool have_objective = false;

  auto flush = [&] {
    if (!pending) return;
    std::vector<std::string_view> toks(pending->tokens.begin(), pending->tokens.end());
    const std::string field = pending->name.empty() ? "objective" : pending->name;
    if (section == Section::Objective) {
      model.objective_name = pending->name.empty() ? "obj" : pending->name;
      model.objective = parse_terms(toks, pending->line, field);
      have_objective = true;
    } else {
      auto rel = std::find_if(toks.begin(), toks.end(),
                              [](std::string_view t) { return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>"; });
      if (rel == toks.end()) throw ParseError(pending->line, field, "missing relation");
      if (std::next(rel) == toks.end() || std::next(rel, 2) != toks.end())
        throw ParseError(pending->line, field, "expected a single right-hand side value");
      const auto rhs = as_number(*std::next(rel));
      if (!rhs) throw ParseError(pending->line, field, "right-hand side is not a number");
      Row row;
      row.name = pending->name;
      row.terms = parse_terms({toks.begin(), rel}, pending->line, field);
      const std::string_view r = *rel;
      row.sense = (r == "=") ? Sense::Equal : (r[0] == '<' || r == "=<") ? Sense::LessEqual : Sense::GreaterEqual;
      row.rhs = *rhs;
      model.rows.push_back(std::move(row));
    }
    pending.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size() && section != Section::Done) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto bs = raw.find('\\'); bs != std::string_view::npos) {
      if (section == Section::Start && bs == 0) model.comments.emplace_back(raw.size() > 2 ? raw.substr(2) : "");
      raw = raw.substr(0, bs);
    }
    auto toks = rbb::detail::split_fields(raw);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const std::string head = lower(toks[0]);
    const std::string joined = toks.size() >= 2 ? head + " " + lower(toks[1]) : head;
    std::optional<Section> next;
    if (toks.size() == 1 && (head == "minimize" || head == "minimise" || head == "min")) {
      next = Section::Objective;
      model.minimize = true;
    } else if (toks.size() == 1 && (head == "maximize" || head == "maximise" || head == "max")) {
      next = Section::Objective;
      model.minimize = false;
    } else if ((toks.size() == 2 && joined == "subject to") ||
               (toks.size() == 1 && (head == "st" || head == "s.t." || head == "such"))) {
      next = Section::Constraints;
    } else if (toks.size() == 1 && (head == "bounds" || head == "bound")) {
      next = Section::Bounds;
    } else if (toks.size() == 1 && (head == "binary" || head == "binaries" || head == "bin")) {
      next = Section::Binary;
    } else if (toks.size() == 1 && (head == "general" || head == "generals" || head == "gen")) {
      next = Section::General;
    } else if (toks.size() == 1 && head == "end") {
      next = Section::Done;
    }
    if (next) {
      flush();
      if (*next == Section::Constraints && !have_objective && section != Section::Objective)
        throw ParseError(line_no, "Subject To", "constraints before objective");
      section = *next;
      continue;
    }

    switch (section) {
      case Section::Start:
        throw ParseError(line_no, std::string(toks[0]), "content before the objective section");
      case Section::Objective:
      case Section::Constraints: {
        std::vector<std::string_view> body(toks.begin(), toks.end());
        std::string name;
        if (body[0].size() > 1 && body[0].back() == ':') {
          flush();
          name = std::string(body[0].substr(0, body[0].size() - 1));
          body.erase(body.begin());
        } else if (body.size() >= 2 && body[1] == ":") {
          flush();
          name = std::string(body[0]);
          body.erase(body.begin(), body.begin() + 2);
        } else if (!pending) {
          pending = Pending{line_no, "", {}};
        }
        if (!name.empty()) {
          if (!is_name(name)) throw ParseError(line_no, name, "invalid row name");
          pending = Pending{line_no, name, {}};
        }
        for (auto t : body) pending->tokens.emplace_back(t);
        break;
      }
      case Section::Bounds: {
        Bound b;
        auto num = [&](std::string_view t) {
          auto v = as_number(t);
          if (!v) throw ParseError(line_no, "bounds", "expected a number, found '" + std::string(t) + "'");
          return *v;
        };
        if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          b = {std::string(toks[2]), num(toks[0]), num(toks[4])};
        } else if (toks.size() == 3 && toks[1] == "=") {
          b.var = std::string(toks[0]);
          b.lower = b.upper = num(toks[2]);
        } else if (toks.size() == 3 && toks[1] == ">=") {
          b.var = std::string(toks[0]);
          b.lower = num(toks[2]);
        } else if (toks.size() == 3 && toks[1] == "<=") {
          b.var = std::string(toks[0]);
          b.upper = num(toks[2]);
        } else if (toks.size() == 2 && lower(toks[1]) == "free") {
          b = {std::string(toks[0]), -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        } else {
          throw ParseError(line_no, "bounds", "unrecognised bound");
        }
        if (!is_name(b.var)) throw ParseError(line_no, "bounds", "invalid variable name '" + b.var + "'");
        model.bounds.push_back(std::move(b));
        break;
      }
      case Section::Binary:
      case Section::General:
        for (auto t : toks) {
          if (!is_name(t)) throw ParseError(line_no, "declaration", "invalid variable name '" + std::string(t) + "'");
          (section == Section::Binary ? model.binaries : model.generals).emplace_back(t);
        }
        break;
      case Section::Done:
        break;
    }
    if (end == text.size()) break;
  }
  if (section != Section::Done) throw ParseError(line_no, "End", "missing End marker");
  if (!have_objective) throw ParseError(line_no, "objective", "missing objective section");
  return model;
}

}  // namespace rbb::lp
