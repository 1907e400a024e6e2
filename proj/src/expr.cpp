#include "phm/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace phm {

namespace {
struct FuncEntry {
  const char* name;
  Func f;
};
constexpr FuncEntry kFuncs[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},
    {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
    {"tanh", Func::Tanh}, {"atan", Func::Atan},
};
}  // namespace

const char* func_name(Func f) {
  for (const auto& e : kFuncs)
    if (e.f == f) return e.name;
  return "?";
}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = v;
  return Expr(std::move(n));
}
Expr Expr::coord(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coord;
  n->index = index;
  return Expr(std::move(n));
}
Expr Expr::param(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->index = index;
  return Expr(std::move(n));
}
Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = arg.node_;
  return Expr(std::move(n));
}
Expr Expr::pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->index = exponent;
  n->a = base.node_;
  return Expr(std::move(n));
}
Expr Expr::binary(Kind k, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}
Expr Expr::operator-() const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->a = node_;
  return Expr(std::move(n));
}

double Expr::pow_eval(double x, int k) {
  if (x == 0.0 && k < 0) throw DomainError("pow", "zero base with negative exponent");
  return std::pow(x, k);
}

double Expr::call_eval(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Log:
      if (x <= 0.0) throw DomainError("log", "argument " + std::to_string(x) + " <= 0");
      return std::log(x);
    case Func::Sqrt:
      if (x <= 0.0) throw DomainError("sqrt", "argument " + std::to_string(x) + " <= 0");
      return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
    case Func::Tanh: return std::tanh(x);
    case Func::Atan: return std::atan(x);
  }
  throw std::logic_error("Expr: corrupt function");
}

Jet2 Expr::call_eval(Func f, const Jet2& x) {
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sqrt: return sqrt(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Tanh: return tanh(x);
    case Func::Atan: return atan(x);
  }
  throw std::logic_error("Expr: corrupt function");
}

// ---------------------------------------------------------------------------
// Rewriting

std::shared_ptr<const Expr::Node> clone_rewrite(const Expr::Node& n, const std::vector<int>* remap,
                                                const std::vector<double>* bind) {
  auto out = std::make_shared<Expr::Node>(n);
  if (n.kind == Expr::Kind::Coord && remap) {
    if (n.index >= static_cast<int>(remap->size()))
      throw std::logic_error("Expr: remap table too small");
    out->index = (*remap)[n.index];
  } else if (n.kind == Expr::Kind::Param && bind) {
    if (n.index >= static_cast<int>(bind->size()))
      throw std::logic_error("Expr: parameter binding table too small");
    out->kind = Expr::Kind::Number;
    out->number = (*bind)[n.index];
    out->index = 0;
  }
  if (n.a) out->a = clone_rewrite(*n.a, remap, bind);
  if (n.b) out->b = clone_rewrite(*n.b, remap, bind);
  return out;
}

Expr Expr::remap_coords(const std::vector<int>& remap) const {
  return Expr(clone_rewrite(*node_, &remap, nullptr));
}
Expr Expr::bind_params(const std::vector<double>& values) const {
  return Expr(clone_rewrite(*node_, nullptr, &values));
}

// ---------------------------------------------------------------------------
// Printing.  Levels: 0 add, 1 mul, 2 unary, 3 power-base/atom.

void print_node(const Expr::Node& n, int level, const std::vector<std::string>& coords,
                const std::vector<std::string>& params, std::string& out) {
  const auto wrap = [&](int mylevel, auto&& body) {
    const bool paren = mylevel < level;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (n.kind) {
    case Expr::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      if (n.number < 0) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Expr::Kind::Coord:
      out += n.index < static_cast<int>(coords.size()) ? coords[n.index]
                                                       : "#c" + std::to_string(n.index);
      return;
    case Expr::Kind::Param:
      out += n.index < static_cast<int>(params.size()) ? params[n.index]
                                                       : "#p" + std::to_string(n.index);
      return;
    case Expr::Kind::Add:
      wrap(0, [&] {
        print_node(*n.a, 0, coords, params, out);
        out += '+';
        print_node(*n.b, 1, coords, params, out);
      });
      return;
    case Expr::Kind::Sub:
      wrap(0, [&] {
        print_node(*n.a, 0, coords, params, out);
        out += '-';
        print_node(*n.b, 1, coords, params, out);
      });
      return;
    case Expr::Kind::Mul:
      wrap(1, [&] {
        print_node(*n.a, 1, coords, params, out);
        out += '*';
        print_node(*n.b, 2, coords, params, out);
      });
      return;
    case Expr::Kind::Div:
      wrap(1, [&] {
        print_node(*n.a, 1, coords, params, out);
        out += '/';
        print_node(*n.b, 2, coords, params, out);
      });
      return;
    case Expr::Kind::Neg:
      wrap(2, [&] {
        out += '-';
        print_node(*n.a, 3, coords, params, out);
      });
      return;
    case Expr::Kind::Pow:
      wrap(3, [&] {
        // The base must be an atom at print level: parenthesize anything else.
        const bool atom = n.a->kind == Expr::Kind::Coord || n.a->kind == Expr::Kind::Param ||
                          n.a->kind == Expr::Kind::Call ||
                          (n.a->kind == Expr::Kind::Number && n.a->number >= 0);
        if (!atom) out += '(';
        print_node(*n.a, 0, coords, params, out);
        if (!atom) out += ')';
        out += '^';
        out += std::to_string(n.index);
      });
      return;
    case Expr::Kind::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, 0, coords, params, out);
      out += ')';
      return;
  }
}

std::string Expr::print(const std::vector<std::string>& coord_names,
                        const std::vector<std::string>& param_names) const {
  std::string out;
  print_node(*node_, 0, coord_names, param_names, out);
  return out;
}

bool nodes_equal(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.number == b.number;
    case Expr::Kind::Coord:
    case Expr::Kind::Param: return a.index == b.index;
    case Expr::Kind::Pow: return a.index == b.index && nodes_equal(*a.a, *b.a);
    case Expr::Kind::Call: return a.func == b.func && nodes_equal(*a.a, *b.a);
    case Expr::Kind::Neg: return nodes_equal(*a.a, *b.a);
    default: return nodes_equal(*a.a, *b.a) && nodes_equal(*a.b, *b.b);
  }
}

bool structurally_equal(const Expr& a, const Expr& b) { return nodes_equal(*a.node_, *b.node_); }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& coords,
         const std::vector<std::string>& params)
      : s_(text), coords_(coords), params_(params) {}

  Expr run() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(0, "empty expression");
    Expr e = expr();
    skip_ws();
    if (pos_ < s_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        e = e * factor();
      else if (accept('/'))
        e = e / factor();
      else
        return e;
    }
  }

  Expr factor() {
    skip_ws();
    const bool neg = accept('-');
    Expr e = base();
    skip_ws();
    if (accept('^')) e = Expr::pow(std::move(e), integer());
    if (neg) e = -e;
    return e;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError(pos_, "digits expected after decimal point");
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError(pos_, "digits expected in exponent");
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    return Expr::number(std::strtod(s_.c_str() + start, nullptr));
  }

  Expr identifier() {
    const size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      for (const auto& e : kFuncs)
        if (name == e.name) {
          ++pos_;  // consume '('
          Expr arg = expr();
          skip_ws();
          if (pos_ < s_.size() && s_[pos_] == ',')
            throw ParseError(pos_, "function '" + name + "' takes exactly one argument");
          expect(')');
          return Expr::call(e.f, std::move(arg));
        }
      throw ParseError(start, "unknown function '" + name + "'");
    }
    for (size_t i = 0; i < coords_.size(); ++i)
      if (name == coords_[i]) return Expr::coord(static_cast<int>(i));
    for (size_t i = 0; i < params_.size(); ++i)
      if (name == params_[i]) return Expr::param(static_cast<int>(i));
    for (const auto& e : kFuncs)
      if (name == e.name) throw ParseError(start, "function '" + name + "' used without arguments");
    throw ParseError(start, "unknown identifier '" + name + "'");
  }

  int integer() {
    skip_ws();
    const size_t start = pos_;
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError(start, "integer exponent expected after '^'");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 64) throw ParseError(start, "exponent magnitude above 64");
      ++pos_;
    }
    return static_cast<int>(neg ? -v : v);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& coords_;
  const std::vector<std::string>& params_;
  size_t pos_ = 0;
};

Expr parse_expression(const std::string& text, const std::vector<std::string>& coord_names,
                      const std::vector<std::string>& param_names) {
  return Parser(text, coord_names, param_names).run();
}

}  // namespace phm
