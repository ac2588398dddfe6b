#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "proxkkt/expr.hpp"

namespace proxkkt {

std::string_view func_name(ExprFunc f) {
  switch (f) {
    case ExprFunc::Sin: return "sin";
    case ExprFunc::Cos: return "cos";
    case ExprFunc::Exp: return "exp";
    case ExprFunc::Log: return "log";
    case ExprFunc::Sqrt: return "sqrt";
  }
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant:
      if (a.constant != b.constant) return false;
      break;
    case ExprKind::Variable:
      if (a.var_index != b.var_index) return false;
      break;
    case ExprKind::Call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(*a.children[i] == *b.children[i])) return false;
  }
  return true;
}

namespace {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t offset;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    tok_.offset = pos_;
    tok_.text.clear();
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::Plus; ++pos_; return;
      case '-': tok_.kind = Token::Minus; ++pos_; return;
      case '*': tok_.kind = Token::Star; ++pos_; return;
      case '/': tok_.kind = Token::Slash; ++pos_; return;
      case '^': tok_.kind = Token::Caret; ++pos_; return;
      case '(': tok_.kind = Token::LParen; ++pos_; return;
      case ')': tok_.kind = Token::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      tok_.kind = Token::Ident;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (text == ".") {
      throw ParseError(start, "malformed number");
    }
    tok_.kind = Token::Number;
    tok_.number = std::strtod(text.c_str(), nullptr);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

std::shared_ptr<Expr> make_node(ExprKind kind, int dim,
                                std::vector<ExprPtr> children = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->dim = dim;
  e->children = std::move(children);
  return e;
}

class Parser {
 public:
  Parser(std::string_view src, int n) : lex_(src), n_(n) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::End) {
      throw ParseError(t.offset, "expected operator or end of expression");
    }
    return e;
  }

 private:
  // sum := term (('+'|'-') term)*
  ExprPtr sum() {
    ExprPtr left = term();
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Plus || t.kind == Token::Minus) {
        const bool plus = t.kind == Token::Plus;
        lex_.take();
        ExprPtr right = term();
        left = make_node(plus ? ExprKind::Add : ExprKind::Sub, n_, {left, right});
      } else {
        return left;
      }
    }
  }

  // term := factor (('*'|'/') factor)*
  ExprPtr term() {
    ExprPtr left = factor();
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Star || t.kind == Token::Slash) {
        const bool mul = t.kind == Token::Star;
        lex_.take();
        ExprPtr right = factor();
        left = make_node(mul ? ExprKind::Mul : ExprKind::Div, n_, {left, right});
      } else {
        return left;
      }
    }
  }

  // factor := '-' factor | power
  ExprPtr factor() {
    if (lex_.peek().kind == Token::Minus) {
      lex_.take();
      return make_node(ExprKind::Neg, n_, {factor()});
    }
    return power();
  }

  // power := atom ('^' factor)?   -- right-assoc, exponent may carry '-'
  ExprPtr power() {
    ExprPtr base = atom();
    if (lex_.peek().kind == Token::Caret) {
      lex_.take();
      ExprPtr exponent = factor();
      return make_node(ExprKind::Pow, n_, {base, exponent});
    }
    return base;
  }

  ExprPtr atom() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Token::Number: {
        lex_.take();
        auto e = make_node(ExprKind::Constant, n_);
        e->constant = t.number;
        return e;
      }
      case Token::LParen: {
        lex_.take();
        ExprPtr inner = sum();
        const Token& close = lex_.peek();
        if (close.kind != Token::RParen) {
          throw ParseError(close.offset, "expected ')'");
        }
        lex_.take();
        return inner;
      }
      case Token::Ident:
        return identifier();
      default:
        throw ParseError(t.offset, "expected number, variable, function or '('");
    }
  }

  ExprPtr identifier() {
    Token t = lex_.take();
    // x<digits> is a variable reference
    if (t.text.size() >= 2 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(t.text.data() + 1,
                                       t.text.data() + t.text.size(), index);
      (void)ptr;
      if (ec != std::errc() || index < 1 || index > n_) {
        throw UnknownVariable(t.offset, index, n_);
      }
      auto e = make_node(ExprKind::Variable, n_);
      e->var_index = index;
      return e;
    }
    ExprFunc func;
    if (t.text == "sin") func = ExprFunc::Sin;
    else if (t.text == "cos") func = ExprFunc::Cos;
    else if (t.text == "exp") func = ExprFunc::Exp;
    else if (t.text == "log") func = ExprFunc::Log;
    else if (t.text == "sqrt") func = ExprFunc::Sqrt;
    else throw UnknownFunction(t.offset, t.text);

    const Token& open = lex_.peek();
    if (open.kind != Token::LParen) {
      throw ParseError(open.offset, "expected '(' after function name");
    }
    lex_.take();
    ExprPtr arg = sum();
    const Token& close = lex_.peek();
    if (close.kind != Token::RParen) {
      throw ParseError(close.offset, "expected ')'");
    }
    lex_.take();
    auto e = make_node(ExprKind::Call, n_, {arg});
    e->func = func;
    return e;
  }

  Lexer lex_;
  int n_;
};

// Binding strength used by the canonical printer.
int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

void print(const Expr& e, int min_prec, std::string& out) {
  const int p = precedence(e.kind);
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.constant);
      out += buf;
      break;
    }
    case ExprKind::Variable:
      out += 'x';
      out += std::to_string(e.var_index);
      break;
    case ExprKind::Add:
      print(*e.children[0], 1, out);
      out += " + ";
      print(*e.children[1], 2, out);
      break;
    case ExprKind::Sub:
      print(*e.children[0], 1, out);
      out += " - ";
      print(*e.children[1], 2, out);
      break;
    case ExprKind::Mul:
      print(*e.children[0], 2, out);
      out += "*";
      print(*e.children[1], 3, out);
      break;
    case ExprKind::Div:
      print(*e.children[0], 2, out);
      out += "/";
      print(*e.children[1], 3, out);
      break;
    case ExprKind::Neg:
      out += '-';
      print(*e.children[0], 3, out);
      break;
    case ExprKind::Pow:
      print(*e.children[0], 5, out);
      out += '^';
      print(*e.children[1], 3, out);
      break;
    case ExprKind::Call:
      out += func_name(e.func);
      out += '(';
      print(*e.children[0], 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

ExprPtr parse_expression(std::string_view text, int n) {
  if (text.empty()) {
    throw ParseError(0, "empty expression");
  }
  if (n < 1) {
    throw DimensionMismatch("expression dimension must be >= 1");
  }
  return Parser(text, n).parse();
}

std::string unparse_expression(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

}  // namespace proxkkt
