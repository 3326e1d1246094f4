#include "hkt/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

namespace hkt {

struct Expression::Node {
  enum Kind { Number, Variable, Unary, Binary, Call } kind = Number;
  double value = 0;
  int variable = 0;  // 0-based
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(std::span<const double> x) const {
    switch (kind) {
      case Number: return value;
      case Variable: return x[static_cast<size_t>(variable)];
      case Unary: return -lhs->eval(x);
      case Call: return fn(lhs->eval(x));
      case Binary: {
        const double a = lhs->eval(x), b = rhs->eval(x);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          default: return std::pow(a, b);
        }
      }
    }
    return 0;
  }

  bool uses(int v) const {
    if (kind == Variable) return variable == v;
    return (lhs && lhs->uses(v)) || (rhs && rhs->uses(v));
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tan(double v) { return std::tan(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }
double fn_tanh(double v) { return std::tanh(v); }

const std::map<std::string, double (*)(double)>& functions() {
  static const std::map<std::string, double (*)(double)> table = {
      {"sin", fn_sin},   {"cos", fn_cos}, {"tan", fn_tan}, {"exp", fn_exp},
      {"log", fn_log},   {"sqrt", fn_sqrt}, {"abs", fn_abs}, {"tanh", fn_tanh}};
  return table;
}

class Parser {
 public:
  Parser(const std::string& s, int max_variable) : s_(s), max_var_(max_variable) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Expression::Node::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    auto a = term();
    for (;;) {
      if (accept('+')) a = binary('+', a, term());
      else if (accept('-')) a = binary('-', a, term());
      else return a;
    }
  }

  NodePtr term() {
    auto a = unary();
    for (;;) {
      if (accept('*')) a = binary('*', a, unary());
      else if (accept('/')) a = binary('/', a, unary());
      else return a;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Expression::Node::Unary;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      auto e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->value = std::numbers::pi;
        return n;
      }
      if (id.size() > 1 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int v = std::stoi(id.substr(1));
        if (v < 1 || v > max_var_) fail("variable " + id + " outside x1..x" + std::to_string(max_var_));
        auto n = std::make_shared<Expression::Node>();
        n->kind = Expression::Node::Variable;
        n->variable = v - 1;
        return n;
      }
      const auto it = functions().find(id);
      if (it == functions().end()) fail("unknown identifier '" + id + "'");
      if (!accept('(')) fail("expected '(' after " + id);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Expression::Node::Call;
      n->fn = it->second;
      n->lhs = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int max_var_;
  size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression("0", 0) {}

Expression::Expression(const std::string& text, int max_variable)
    : text_(text), root_(Parser(text_, max_variable).parse()) {}

Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;

double Expression::operator()(std::span<const double> x) const { return root_->eval(x); }

bool Expression::uses(int v) const { return root_->uses(v - 1); }

}  // namespace hkt
