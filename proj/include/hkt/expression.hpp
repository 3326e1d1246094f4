#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace hkt {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form scalar expression in the real torus coordinates x1..x{4n}.
// Grammar: numbers, x<N>, pi, + - * / ^ (right associative), unary minus,
// parentheses, and sin cos tan exp log sqrt abs tanh.
class Expression {
 public:
  Expression();
  // Throws ParseError on malformed input or a variable index above max_variable.
  Expression(const std::string& text, int max_variable);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);

  double operator()(std::span<const double> x) const;
  const std::string& text() const { return text_; }
  // True if the value depends on x<v> (1-based).
  bool uses(int v) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace hkt
