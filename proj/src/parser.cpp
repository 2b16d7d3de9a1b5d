#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <filesystem>

#include "pareto/problem.hpp"

namespace pareto {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int column;  // 1-based
};

struct VariableUse {
  int index;  // zero-based
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src, int line, int first_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto col = [&](std::size_t at) { return first_column + static_cast<int>(at); };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      std::string text(src.substr(start, i - start));
      if (text == ".") throw ParseError(line, col(start), "malformed number");
      out.push_back({Tok::Number, std::move(text), col(start)});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), col(start)});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default:
        throw ParseError(line, col(start), std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), col(start)});
    ++i;
  }
  out.push_back({Tok::End, "", col(src.size())});
  return out;
}

std::optional<int> variable_index(const std::string& ident) {
  if (ident.size() < 2 || ident[0] != 'x' || ident[1] == '0') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), value);
  if (ec != std::errc() || ptr != ident.data() + ident.size() || value < 1) return std::nullopt;
  return value - 1;
}

bool is_integer_literal(const std::string& text) {
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !text.empty();
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> tokens, int line, std::vector<VariableUse>& uses)
      : toks_(std::move(tokens)), line_(line), uses_(uses) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(line_, t.column, msg);
  }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const std::string got = peek().kind == Tok::End ? "end of line" : "'" + peek().text + "'";
      fail(peek(), std::string("expected ") + what + ", got " + got);
    }
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Op op = next().kind == Tok::Plus ? Op::Add : Op::Sub;
      lhs = Expr::binary(op, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Op op = next().kind == Tok::Star ? Op::Mul : Op::Div;
      lhs = Expr::binary(op, lhs, factor());
    }
    return lhs;
  }

  Expr factor() {
    Expr b = base();
    if (peek().kind != Tok::Caret) return b;
    ++pos_;
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      negative = true;
      ++pos_;
    }
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "expected integer exponent");
    if (!is_integer_literal(t.text)) fail(t, "non-integer exponent '" + t.text + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail(t, "exponent out of range");
    ++pos_;
    return Expr::power(b, negative ? -value : value);
  }

  Expr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
          fail(t, "malformed number '" + t.text + "'");
        ++pos_;
        return Expr::constant(v);
      }
      case Tok::Ident: {
        ++pos_;
        if (t.text == "sin" || t.text == "cos" || t.text == "exp") {
          const Op op = t.text == "sin" ? Op::Sin : t.text == "cos" ? Op::Cos : Op::Exp;
          expect(Tok::LParen, "'('");
          Expr inner = expr();
          expect(Tok::RParen, "')'");
          return Expr::unary(op, inner);
        }
        if (auto idx = variable_index(t.text)) {
          uses_.push_back({*idx, line_, t.column});
          return Expr::variable(*idx);
        }
        fail(t, "unknown identifier '" + t.text + "'");
      }
      case Tok::LParen: {
        ++pos_;
        Expr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Minus: {
        ++pos_;
        return Expr::unary(Op::Neg, base());
      }
      case Tok::End: fail(t, "unexpected end of line");
      default: fail(t, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
  std::vector<VariableUse>& uses_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Problem parse_problem(std::string_view text, std::string name) {
  std::vector<Expr> objectives;
  std::vector<VariableUse> uses;
  std::optional<std::size_t> declared;
  int line_no = 0;
  int last_line = 1;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    last_line = line_no;

    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const int indent = static_cast<int>(raw.find_first_not_of(" \t"));

    const auto colon = line.find(':');
    const std::string_view keyword = colon == std::string_view::npos ? line : line.substr(0, colon);
    if (colon == std::string_view::npos || (keyword != "vars" && keyword != "objective"))
      throw ParseError(line_no, indent + 1, "expected 'vars:' or 'objective:' statement");
    const std::string_view body = line.substr(colon + 1);
    const int body_column = indent + static_cast<int>(colon) + 2;

    if (keyword == "vars") {
      if (declared) throw ParseError(line_no, indent + 1, "duplicate 'vars:' statement");
      const auto toks = tokenize(body, line_no, body_column);
      std::size_t count = 0;
      for (const Token& t : toks) {
        if (t.kind == Tok::End) break;
        if (t.kind != Tok::Ident) throw ParseError(line_no, t.column, "expected variable name");
        const auto idx = variable_index(t.text);
        if (!idx) throw ParseError(line_no, t.column, "unknown identifier '" + t.text + "'");
        if (static_cast<std::size_t>(*idx) != count)
          throw ParseError(line_no, t.column,
                           "variables must be declared as x1..xn in order, got '" + t.text + "'");
        ++count;
      }
      if (count == 0) throw ParseError(line_no, body_column, "'vars:' needs at least one variable");
      declared = count;
    } else {
      ExprParser parser(tokenize(body, line_no, body_column), line_no, uses);
      objectives.push_back(parser.parse_all());
    }
  }

  if (objectives.empty()) throw ParseError(last_line, 1, "no 'objective:' statement");

  std::size_t n = 1;
  if (declared) {
    n = *declared;
    for (const VariableUse& u : uses)
      if (static_cast<std::size_t>(u.index) >= n)
        throw ParseError(u.line, u.column,
                         "variable x" + std::to_string(u.index + 1) + " out of range (n = " +
                             std::to_string(n) + ")");
  } else {
    for (const VariableUse& u : uses) n = std::max(n, static_cast<std::size_t>(u.index) + 1);
  }
  return Problem(n, std::move(objectives), std::move(name));
}

Expr parse_expression(std::string_view text, std::size_t n) {
  std::vector<VariableUse> uses;
  ExprParser parser(tokenize(text, 1, 1), 1, uses);
  Expr e = parser.parse_all();
  for (const VariableUse& u : uses)
    if (static_cast<std::size_t>(u.index) >= n)
      throw ParseError(u.line, u.column, "variable index out of range");
  return e;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace pareto
