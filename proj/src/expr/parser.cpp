#include <cctype>
#include <charconv>
#include <vector>

#include "curvcheck/expr.hpp"

namespace curvcheck {

namespace {

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, comma, end };
  Kind kind;
  std::size_t position;
  std::string_view text;
  double value = 0.0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      // Exponent only if followed by a digit (optionally signed); otherwise
      // 'e' starts an identifier and the parser rejects the juxtaposition.
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      Token tok{Token::Kind::number, start, s.substr(start, i - start)};
      auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
      if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size())
        throw ParseError(ParseError::Kind::lex, start,
                         "malformed number '" + std::string(tok.text) + "'");
      tokens.push_back(tok);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      tokens.push_back({Token::Kind::ident, start, s.substr(start, i - start)});
      continue;
    }
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        tokens.push_back({Token::Kind::op, start, s.substr(start, 1)});
        break;
      case '(':
        tokens.push_back({Token::Kind::lparen, start, s.substr(start, 1)});
        break;
      case ')':
        tokens.push_back({Token::Kind::rparen, start, s.substr(start, 1)});
        break;
      case ',':
        tokens.push_back({Token::Kind::comma, start, s.substr(start, 1)});
        break;
      default:
        throw ParseError(ParseError::Kind::lex, start,
                         std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  tokens.push_back({Token::Kind::end, s.size(), {}});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Expr parse_all() {
    if (peek().kind == Token::Kind::end)
      throw ParseError(ParseError::Kind::syntax, 0, "empty expression");
    Expr e = expression();
    if (peek().kind != Token::Kind::end)
      throw ParseError(ParseError::Kind::syntax, peek().position,
                       "unexpected token '" + std::string(peek().text) + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool at_op(char c) const {
    return peek().kind == Token::Kind::op && peek().text[0] == c;
  }

  Expr expression() {
    Expr lhs = term();
    while (at_op('+') || at_op('-')) {
      const BinaryOp op = next().text[0] == '+' ? BinaryOp::add : BinaryOp::subtract;
      lhs = Expr::binary(op, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (at_op('*') || at_op('/')) {
      const BinaryOp op = next().text[0] == '*' ? BinaryOp::multiply : BinaryOp::divide;
      lhs = Expr::binary(op, lhs, factor());
    }
    return lhs;
  }

  // Unary minus sits above '^' so that -r^2 reads as -(r^2).
  Expr factor() {
    if (at_op('-')) {
      next();
      return Expr::negate(factor());
    }
    Expr b = base();
    if (at_op('^')) {
      next();
      return Expr::binary(BinaryOp::power, b, factor());
    }
    return b;
  }

  Expr base() {
    const Token& tok = next();
    switch (tok.kind) {
      case Token::Kind::number:
        return Expr(tok.value);
      case Token::Kind::ident: {
        const auto fn = function_from_name(tok.text);
        if (peek().kind == Token::Kind::lparen) {
          if (!fn)
            throw ParseError(ParseError::Kind::syntax, tok.position,
                             "'" + std::string(tok.text) + "' is not a function");
          const std::size_t open = next().position;
          std::vector<Expr> args;
          if (peek().kind != Token::Kind::rparen) {
            args.push_back(expression());
            while (peek().kind == Token::Kind::comma) {
              next();
              args.push_back(expression());
            }
          }
          expect_rparen(open);
          if (args.size() != 1)
            throw ParseError(ParseError::Kind::arity, tok.position,
                             std::string(tok.text) + " takes 1 argument, got " +
                                 std::to_string(args.size()));
          return Expr::call(*fn, args.front());
        }
        if (fn)
          throw ParseError(ParseError::Kind::syntax, tok.position,
                           "function '" + std::string(tok.text) + "' requires an argument list");
        return Expr::symbol(std::string(tok.text));
      }
      case Token::Kind::lparen: {
        Expr inner = expression();
        expect_rparen(tok.position);
        return inner;
      }
      case Token::Kind::end:
        throw ParseError(ParseError::Kind::syntax, tok.position, "unexpected end of input");
      default:
        throw ParseError(ParseError::Kind::syntax, tok.position,
                         "unexpected token '" + std::string(tok.text) + "'");
    }
  }

  void expect_rparen(std::size_t open) {
    if (peek().kind != Token::Kind::rparen)
      throw ParseError(ParseError::Kind::syntax, peek().position,
                       "expected ')' to close '(' at " + std::to_string(open));
    next();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace curvcheck
