#include "lswe/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace lswe {

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::constant;
  n->number = v;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::variable;
  n->index = index;
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_neg(NodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::neg;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_call(FuncId f, NodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::call;
  n->func = f;
  n->lhs = std::move(operand);
  return n;
}

double eval_call(FuncId f, double x) {
  switch (f) {
    case FuncId::sin:
      return std::sin(x);
    case FuncId::cos:
      return std::cos(x);
    case FuncId::exp:
      return std::exp(x);
    case FuncId::log:
      if (x <= 0.0) throw DomainError("log of non-positive argument");
      return std::log(x);
    case FuncId::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative argument");
      return std::sqrt(x);
    case FuncId::tanh:
      return std::tanh(x);
  }
  throw Error("unreachable function id");
}

double eval_pow(double base, double expo) {
  double rounded = std::nearbyint(expo);
  bool integral = expo == rounded && std::abs(expo) < 1e15;
  if (!integral && base <= 0.0) {
    throw DomainError("non-integer power of a non-positive base");
  }
  return std::pow(base, expo);
}

double eval_node(const ExprNode& n, std::span<const double> point) {
  switch (n.kind) {
    case NodeKind::constant:
      return n.number;
    case NodeKind::variable:
      return point[static_cast<std::size_t>(n.index - 1)];
    case NodeKind::add:
      return eval_node(*n.lhs, point) + eval_node(*n.rhs, point);
    case NodeKind::sub:
      return eval_node(*n.lhs, point) - eval_node(*n.rhs, point);
    case NodeKind::mul:
      return eval_node(*n.lhs, point) * eval_node(*n.rhs, point);
    case NodeKind::div: {
      double d = eval_node(*n.rhs, point);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_node(*n.lhs, point) / d;
    }
    case NodeKind::pow:
      return eval_pow(eval_node(*n.lhs, point), eval_node(*n.rhs, point));
    case NodeKind::neg:
      return -eval_node(*n.lhs, point);
    case NodeKind::call:
      return eval_call(n.func, eval_node(*n.lhs, point));
  }
  throw Error("unreachable node kind");
}

bool is_const(const NodePtr& n) { return n->kind == NodeKind::constant; }

/**
 * Bottom-up constant folding.  A sub-tree is replaced by its value only when
 * evaluation succeeds and yields a finite number, so domain errors (and inf
 * overflow) still happen at evaluate() time, exactly as without folding.
 */
NodePtr fold(const NodePtr& n) {
  NodePtr lhs = n->lhs ? fold(n->lhs) : nullptr;
  NodePtr rhs = n->rhs ? fold(n->rhs) : nullptr;
  if (lhs == n->lhs && rhs == n->rhs) {
    if (n->kind == NodeKind::constant || n->kind == NodeKind::variable) return n;
  }

  auto rebuilt = std::make_shared<ExprNode>(*n);
  rebuilt->lhs = lhs;
  rebuilt->rhs = rhs;

  bool foldable = false;
  switch (n->kind) {
    case NodeKind::constant:
    case NodeKind::variable:
      return rebuilt;
    case NodeKind::neg:
    case NodeKind::call:
      foldable = is_const(lhs);
      break;
    default:
      foldable = is_const(lhs) && is_const(rhs);
      break;
  }
  if (!foldable) return rebuilt;

  try {
    double v = eval_node(*rebuilt, {});
    if (!std::isfinite(v)) return rebuilt;
    return make_constant(v);
  } catch (const DomainError&) {
    return rebuilt;
  }
}

struct FuncEntry {
  const char* name;
  FuncId id;
};

constexpr std::array<FuncEntry, 6> kFuncs = {{{"sin", FuncId::sin},
                                              {"cos", FuncId::cos},
                                              {"exp", FuncId::exp},
                                              {"log", FuncId::log},
                                              {"sqrt", FuncId::sqrt},
                                              {"tanh", FuncId::tanh}}};

/** Recursive-descent parser over a byte string; reports errors by byte offset. */
class Parser {
 public:
  Parser(std::string_view src, int dimension) : src_(src), dim_(dimension) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool accept(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) {
      throw ParseError(std::string("expected ") + what, pos_);
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::mul, std::move(lhs), parse_factor());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::div, std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (accept('^')) {
      return make_binary(NodeKind::pow, std::move(base), parse_factor());
    }
    return base;
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      return make_neg(parse_unary());
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of input", pos_);
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')', "')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return parse_identifier();
    }
    throw ParseError("unexpected character", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    auto digit_run = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };

    std::size_t whole = digit_run();
    std::size_t frac = 0;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      frac = digit_run();
    }
    if (whole + frac == 0) {
      throw ParseError("malformed number", start);
    }
    // Optional exponent; consumed only when fully well-formed so "2e" leaves
    // the "e" for the identifier rules to reject.
    std::size_t before_exp = pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digit_run() == 0) pos_ = before_exp;
    }

    double v = 0.0;
    auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    (void)p;
    if (ec == std::errc::result_out_of_range || !std::isfinite(v)) {
      throw ParseError("number literal out of range", start);
    }
    if (ec != std::errc()) {
      throw ParseError("malformed number", start);
    }
    return make_constant(v);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view word = src_.substr(start, pos_ - start);

    if (word == "q") {
      std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == digits) {
        throw ParseError("variable needs an index (q1, q2, ...)", digits);
      }
      int index = 0;
      auto [p, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, index);
      (void)p;
      if (ec != std::errc() || index < 1 || index > dim_) {
        throw ParseError("variable index out of range for dimension " + std::to_string(dim_),
                         start);
      }
      return make_variable(index);
    }

    for (const auto& f : kFuncs) {
      if (word == f.name) {
        expect('(', "'(' after function name");
        NodePtr arg = parse_expr();
        expect(')', "')'");
        return make_call(f.id, std::move(arg));
      }
    }
    throw ParseError("unknown identifier '" + std::string(word) + "'", start);
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void serialize_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::constant:
      if (n.number < 0.0 || (n.number == 0.0 && std::signbit(n.number))) {
        // "-c" re-parses as neg(const c); folding turns that back into const(-c).
        out += '(';
        out += format_double(n.number);
        out += ')';
      } else {
        out += format_double(n.number);
      }
      return;
    case NodeKind::variable:
      out += 'q';
      out += std::to_string(n.index);
      return;
    case NodeKind::neg:
      out += "(-";
      serialize_node(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::call:
      out += func_name(n.func);
      out += '(';
      serialize_node(*n.lhs, out);
      out += ')';
      return;
    default:
      break;
  }
  const char* op = nullptr;
  switch (n.kind) {
    case NodeKind::add:
      op = " + ";
      break;
    case NodeKind::sub:
      op = " - ";
      break;
    case NodeKind::mul:
      op = " * ";
      break;
    case NodeKind::div:
      op = " / ";
      break;
    case NodeKind::pow:
      op = " ^ ";
      break;
    default:
      throw Error("unreachable node kind");
  }
  out += '(';
  serialize_node(*n.lhs, out);
  out += op;
  serialize_node(*n.rhs, out);
  out += ')';
}

}  // namespace

const char* func_name(FuncId f) {
  for (const auto& e : kFuncs) {
    if (e.id == f) return e.name;
  }
  return "?";
}

PotentialExpr PotentialExpr::parse(std::string_view source, int dimension, bool fold_constants) {
  if (dimension < 1) {
    throw ParseError("dimension must be at least 1", 0);
  }
  Parser parser(source, dimension);
  NodePtr root = parser.run();
  if (fold_constants) {
    root = fold(root);
  }
  return PotentialExpr(std::move(root), dimension, std::string(source));
}

double PotentialExpr::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dimension_) {
    throw ValidationError("point size does not match expression dimension");
  }
  return eval_node(*root_, point);
}

std::string PotentialExpr::serialize() const {
  std::string out;
  serialize_node(*root_, out);
  return out;
}

bool tree_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::constant:
      return a.number == b.number && std::signbit(a.number) == std::signbit(b.number);
    case NodeKind::variable:
      return a.index == b.index;
    case NodeKind::call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !tree_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !tree_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace lswe
