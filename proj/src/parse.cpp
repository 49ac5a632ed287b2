#include <cctype>
#include <string>

#include "liftlab/error.hpp"
#include "liftlab/expoly.hpp"

namespace liftlab {
namespace {

enum class Tok { Number, Var, Symbol, Basis, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
      t.kind = Tok::Number;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (c == 'D' && pos_ + 1 < s_.size() && (s_[pos_ + 1] == 'x' || s_[pos_ + 1] == 'y' || s_[pos_ + 1] == 'u')) {
      t.kind = Tok::Basis;
      t.text = std::string(s_.substr(pos_, 2));
      pos_ += 2;
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c)) != 0) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isupper(static_cast<unsigned char>(s_[pos_])) != 0 ||
                                  std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0 || s_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::Symbol;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (c == 'x' || c == 'y' || c == 'u' || c == 'e' || c == 'i') {
      ++pos_;
      t.kind = Tok::Var;
      t.text = std::string(1, c);
      return t;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      ++pos_;
      t.kind = Tok::Op;
      t.text = std::string(1, c);
      return t;
    }
    throw Error(ErrorKind::Parse, "unexpected character '" + std::string(1, c) + "' at " + std::to_string(pos_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view s, bool basis) : lex_(s), text_(s), basis_(basis) { advance(); }

  ExpPoly parse_all() {
    ExpPoly p = expr();
    if (cur_.kind != Tok::End) fail("trailing input");
    return p;
  }

 private:
  void advance() { cur_ = lex_.next(); }
  bool is_op(char c) const { return cur_.kind == Tok::Op && cur_.text[0] == c; }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, what + " at " + std::to_string(cur_.pos) + " in '" + std::string(text_) + "'");
  }
  void expect(char c) {
    if (!is_op(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  ExpPoly expr() {
    bool negate = false;
    if (is_op('+') || is_op('-')) {
      negate = is_op('-');
      advance();
    }
    ExpPoly acc = term();
    if (negate) acc = -acc;
    while (is_op('+') || is_op('-')) {
      bool minus = is_op('-');
      advance();
      ExpPoly t = term();
      if (minus) {
        acc -= t;
      } else {
        acc += t;
      }
    }
    return acc;
  }

  bool starts_atom() const {
    return cur_.kind == Tok::Number || cur_.kind == Tok::Var || cur_.kind == Tok::Symbol ||
           cur_.kind == Tok::Basis || is_op('(');
  }

  ExpPoly term() {
    ExpPoly acc = power();
    while (true) {
      if (is_op('*')) {
        advance();
        acc = acc * power();
      } else if (is_op('/')) {
        advance();
        ExpPoly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc = acc.scaled(d.constant_value().reciprocal());
      } else if (starts_atom()) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  ExpPoly power() {
    ExpPoly base = atom();
    if (!is_op('^')) return base;
    advance();
    bool paren = is_op('(');
    if (paren) advance();
    if (cur_.kind != Tok::Number) fail("expected a nonnegative integer exponent");
    if (cur_.text.size() > 4) fail("exponent too large");
    unsigned n = static_cast<unsigned>(std::stoul(cur_.text));
    advance();
    if (paren) expect(')');
    return base.pow(n);
  }

  ExpPoly atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        mpq_class q(mpz_class(cur_.text));
        advance();
        return ExpPoly(GaussianRational(q));
      }
      case Tok::Symbol: {
        std::string name = cur_.text;
        advance();
        return ExpPoly::symbol(name);
      }
      case Tok::Basis: {
        if (!basis_) fail("'" + cur_.text + "' is only allowed in vector fields");
        std::string name = cur_.text;
        advance();
        return ExpPoly::symbol(name);
      }
      case Tok::Var: {
        char c = cur_.text[0];
        advance();
        if (c == 'x') return X();
        if (c == 'y') return Y();
        if (c == 'u') return U();
        if (c == 'i') return ExpPoly(GaussianRational::i());
        return exponential();
      }
      case Tok::Op:
        if (is_op('(')) {
          advance();
          ExpPoly inner = expr();
          expect(')');
          return inner;
        }
        fail("unexpected '" + cur_.text + "'");
      case Tok::End:
        fail("unexpected end of input");
    }
    fail("unexpected token");
  }

  // After 'e': ^(linear form in x, y).
  ExpPoly exponential() {
    expect('^');
    expect('(');
    ExpPoly lin = expr();
    expect(')');
    Frequency f;
    for (const auto& t : lin.terms()) {
      const Monomial& m = t.mono;
      bool ok = m.u == 0 && m.params.empty() && m.freq.is_zero() && m.x + m.y == 1;
      if (!ok) fail("exponent must be a linear form in x and y with constant coefficients");
      (m.x == 1 ? f.x : f.y) += t.coeff;
    }
    return ExpPoly::exponential(f);
  }

  Lexer lex_;
  std::string_view text_;
  bool basis_;
  Token cur_;
};

}  // namespace

ExpPoly detail::parse_expression(std::string_view text, bool allow_basis_tokens) {
  return Parser(text, allow_basis_tokens).parse_all();
}

}  // namespace liftlab
