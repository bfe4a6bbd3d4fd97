#include <algorithm>
#include <cctype>
#include <charconv>

#include "contactflow/errors.hpp"
#include "contactflow/expr.hpp"

namespace contactflow {

namespace {

enum class TokenKind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::size_t position;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      const std::string_view text = src.substr(start, i - start);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw SyntaxError(start, std::string(text), "malformed number");
      }
      out.push_back({TokenKind::Number, start, std::string(text), value});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({TokenKind::Identifier, start, std::string(src.substr(start, i - start))});
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '/': kind = TokenKind::Slash; break;
      case '^': kind = TokenKind::Caret; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      default:
        throw SyntaxError(start, std::string(1, c), "unexpected character");
    }
    out.push_back({kind, start, std::string(1, c)});
    ++i;
  }
  out.push_back({TokenKind::End, src.size(), "<end>"});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::span<const std::string> names)
      : tokens_(std::move(tokens)), names_(names) {}

  Expr parse_all() {
    Expr e = parse_expr();
    if (peek().kind != TokenKind::End) unexpected("expected end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void unexpected(const std::string& what) const {
    throw SyntaxError(peek().position, peek().text, what);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const bool plus = advance().kind == TokenKind::Plus;
      Expr rhs = parse_term();
      e = plus ? e + rhs : e - rhs;
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
      const bool times = advance().kind == TokenKind::Star;
      Expr rhs = parse_unary();
      e = times ? e * rhs : e / rhs;
    }
    return e;
  }

  Expr parse_unary() {
    if (peek().kind == TokenKind::Minus) {
      advance();
      return -parse_unary();
    }
    if (peek().kind == TokenKind::Plus) {
      advance();
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind != TokenKind::Caret) return base;
    advance();
    const Token& exponent_start = peek();
    Expr exponent = parse_unary();
    if (!exponent.is_constant()) {
      throw SyntaxError(exponent_start.position, exponent_start.text,
                        "exponent must be a numeric constant");
    }
    return pow(base, exponent.value());
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        advance();
        return Expr::constant(t.number);
      case TokenKind::LParen: {
        advance();
        Expr inner = parse_expr();
        if (peek().kind != TokenKind::RParen) unexpected("expected ')'");
        advance();
        return inner;
      }
      case TokenKind::Identifier: {
        advance();
        if (peek().kind == TokenKind::LParen) return parse_call(t);
        if (std::find(names_.begin(), names_.end(), t.text) == names_.end()) {
          throw UnknownIdentifier(t.text);
        }
        return Expr::variable(t.text);
      }
      default:
        unexpected("expected a number, name or '('");
    }
  }

  Expr parse_call(const Token& fn) {
    UnaryFn kind;
    if (fn.text == "sin") kind = UnaryFn::Sin;
    else if (fn.text == "cos") kind = UnaryFn::Cos;
    else if (fn.text == "exp") kind = UnaryFn::Exp;
    else if (fn.text == "log") kind = UnaryFn::Log;
    else throw UnknownIdentifier(fn.text);
    advance();  // '('
    Expr arg = parse_expr();
    if (peek().kind != TokenKind::RParen) unexpected("expected ')'");
    advance();
    return Expr::unary(kind, arg);
  }

  std::vector<Token> tokens_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, std::span<const std::string> declared_names) {
  if (declared_names.empty()) throw InputError("parse requires at least one declared name");
  Parser parser(tokenize(source), declared_names);
  return parser.parse_all();
}

}  // namespace contactflow
