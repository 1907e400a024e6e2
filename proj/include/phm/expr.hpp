// Expression DSL for metric components, map components and tensor fields.
//
// Grammar (left associative, '^' binds tighter than unary minus):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'? base ('^' int)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
// Identifiers must be declared coordinates or parameters.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "phm/jet.hpp"

namespace phm {

struct ParseError : std::runtime_error {
  size_t offset;  // byte offset into the source text
  ParseError(size_t off, const std::string& msg)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Atan };
const char* func_name(Func f);

class Expr {
 public:
  enum class Kind { Number, Coord, Param, Add, Sub, Mul, Div, Neg, Pow, Call };

  Expr() : Expr(number(0.0)) {}

  static Expr number(double v);
  static Expr coord(int index);
  static Expr param(int index);
  static Expr call(Func f, Expr arg);
  static Expr pow(Expr base, int exponent);

  friend Expr operator+(Expr a, Expr b) { return binary(Kind::Add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return binary(Kind::Div, std::move(a), std::move(b)); }
  Expr operator-() const;

  Kind kind() const { return node_->kind; }

  // Plain and jet evaluation share one code path; the Jet2 instantiation is
  // what every field evaluation in the engine uses.
  template <class T>
  T eval(std::span<const T> coords, std::span<const double> params = {}) const {
    return eval_node(*node_, coords, params);
  }
  double eval_d(const std::vector<double>& coords, const std::vector<double>& params = {}) const {
    return eval<double>(std::span<const double>(coords), std::span<const double>(params));
  }
  Jet2 eval_j(const std::vector<Jet2>& coords, const std::vector<double>& params = {}) const {
    return eval<Jet2>(std::span<const Jet2>(coords), std::span<const double>(params));
  }

  // Rebuilds the tree with coordinate index i replaced by remap[i] (used when a
  // chart is embedded into a larger one, e.g. the cone construction).
  Expr remap_coords(const std::vector<int>& remap) const;

  // Rebuilds the tree with parameter references replaced by literals.
  Expr bind_params(const std::vector<double>& values) const;

  std::string print(const std::vector<std::string>& coord_names,
                    const std::vector<std::string>& param_names = {}) const;

  friend bool structurally_equal(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind;
    double number = 0.0;
    int index = 0;  // coordinate/parameter index, or the Pow exponent
    Func func = Func::Sin;
    std::shared_ptr<const Node> a, b;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr binary(Kind k, Expr a, Expr b);

  template <class T>
  static T eval_node(const Node& n, std::span<const T> coords, std::span<const double> params) {
    switch (n.kind) {
      case Kind::Number: return T(n.number);
      case Kind::Coord:
        if (n.index >= static_cast<int>(coords.size()))
          throw std::logic_error("Expr: coordinate index out of range");
        return coords[n.index];
      case Kind::Param:
        if (n.index >= static_cast<int>(params.size()))
          throw std::logic_error("Expr: parameter index out of range");
        return T(params[n.index]);
      case Kind::Add: return eval_node(*n.a, coords, params) + eval_node(*n.b, coords, params);
      case Kind::Sub: return eval_node(*n.a, coords, params) - eval_node(*n.b, coords, params);
      case Kind::Mul: return eval_node(*n.a, coords, params) * eval_node(*n.b, coords, params);
      case Kind::Div: return eval_node(*n.a, coords, params) / eval_node(*n.b, coords, params);
      case Kind::Neg: return -eval_node(*n.a, coords, params);
      case Kind::Pow: return pow_eval(eval_node(*n.a, coords, params), n.index);
      case Kind::Call: return call_eval(n.func, eval_node(*n.a, coords, params));
    }
    throw std::logic_error("Expr: corrupt node");
  }

  static double pow_eval(double x, int k);
  static Jet2 pow_eval(const Jet2& x, int k) { return pow_int(x, k); }
  static double call_eval(Func f, double x);
  static Jet2 call_eval(Func f, const Jet2& x);

  std::shared_ptr<const Node> node_;

  friend class Parser;
  friend std::shared_ptr<const Node> clone_rewrite(const Node&, const std::vector<int>*,
                                                   const std::vector<double>*);
  friend void print_node(const Node&, int, const std::vector<std::string>&,
                         const std::vector<std::string>&, std::string&);
  friend bool nodes_equal(const Node&, const Node&);
};

// Parses `text` against declared coordinate and parameter names.
// Throws ParseError on any malformed input; never crashes.
Expr parse_expression(const std::string& text, const std::vector<std::string>& coord_names,
                      const std::vector<std::string>& param_names = {});

}  // namespace phm
