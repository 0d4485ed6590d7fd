#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "etl/jet.hpp"

namespace etl {

namespace detail {
struct Node;
}

/// A parsed closed-form function of one variable.
///
/// Grammar (whitespace ignored):
///   expr    :=  term (('+' | '-') term)*
///   term    :=  unary (('*' | '/') unary)*
///   unary   :=  '-' unary | power
///   power   :=  atom ('^' unary)?                 -- right associative
///   atom    :=  number | var | 'pi' | 'e'
///             | func '(' expr ')' | '(' expr ')'
///   func    :=  sin cos tan sinh cosh tanh sech csch coth
///               exp log sqrt arctan abs
///
/// The tree is immutable after parsing; evaluation never mutates it, so one
/// Expression may be evaluated concurrently from many threads.
class Expression {
 public:
  Expression() = default;

  /// Parse `text` with the given free-variable name. Throws ParseError with a
  /// byte offset on syntax errors, unknown identifiers, or a wrong variable.
  static Expression parse(std::string_view text, std::string_view var_name);

  /// Value, first and second derivative at x via second-order forward-mode
  /// differentiation. Exact chain rule; overflow surfaces as non-finite
  /// entries in the returned jet (check Jet2::finite()).
  Jet2 eval_jet2(double x) const;

  /// Value only.
  double eval(double x) const;

  /// Canonical text form; parse(print(parse(t))) is structurally equal to
  /// parse(t).
  std::string print() const;

  bool structurally_equal(const Expression& other) const;

  /// True when the tree never references the free variable.
  bool is_constant() const;

  const std::string& variable() const { return var_; }
  bool valid() const { return root_ != nullptr; }

 private:
  std::shared_ptr<const detail::Node> root_;
  std::string var_;
};

}  // namespace etl
