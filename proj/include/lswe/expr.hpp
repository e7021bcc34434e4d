#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "lswe/errors.hpp"

namespace lswe {

enum class NodeKind { constant, variable, add, sub, mul, div, pow, neg, call };

enum class FuncId { sin, cos, exp, log, sqrt, tanh };

const char* func_name(FuncId f);

/**
 * Immutable expression-tree node.  Children are shared so sub-trees can be
 * reused freely; nothing mutates a node after construction.
 */
struct ExprNode {
  NodeKind kind;
  double number = 0.0;   // constant
  int index = 0;         // variable, 1-based (q1, q2, ...)
  FuncId func = FuncId::sin;
  std::shared_ptr<const ExprNode> lhs;  // unary operand lives here
  std::shared_ptr<const ExprNode> rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

/**
 * A parsed potential V(q1..qN).
 *
 * Grammar (whitespace-insensitive):
 *
 *   expr     := term (("+"|"-") term)*
 *   term     := factor (("*"|"/") factor)*
 *   factor   := unary ("^" factor)?          -- "^" is right-associative
 *   unary    := "-" unary | atom
 *   atom     := number | variable | func "(" expr ")" | "(" expr ")"
 *   variable := "q" digit+
 *   func     := "sin" | "cos" | "exp" | "log" | "sqrt" | "tanh"
 *
 * Note that unary minus binds tighter than "^": "-q1^2" parses as "(-q1)^2".
 * Constant sub-trees are folded at parse time; folding never changes the value
 * an expression evaluates to (sub-trees whose folding would raise a domain
 * error are left alone so the error still surfaces at evaluation).
 */
class PotentialExpr {
 public:
  /**
   * Parse `source` over variables q1..q`dimension`.
   * Throws ParseError (with byte offset) on malformed input or a variable
   * index outside [1, dimension].
   */
  static PotentialExpr parse(std::string_view source, int dimension, bool fold_constants = true);

  /** Evaluate at a point of size dimension().  Throws DomainError where undefined. */
  double evaluate(std::span<const double> point) const;

  /**
   * Render the tree as text that parses back to a structurally identical tree.
   * Compound nodes are parenthesised; constants are printed with shortest
   * round-trip precision.
   */
  std::string serialize() const;

  int dimension() const { return dimension_; }
  const std::string& source() const { return source_; }
  const NodePtr& root() const { return root_; }

 private:
  PotentialExpr(NodePtr root, int dimension, std::string source)
      : root_(std::move(root)), dimension_(dimension), source_(std::move(source)) {}

  NodePtr root_;
  int dimension_;
  std::string source_;
};

/** Structural tree equality (kind, numbers bit-for-bit, indices, children). */
bool tree_equal(const ExprNode& a, const ExprNode& b);

}  // namespace lswe
