#include "lswe/taylor.hpp"

#include <algorithm>
#include <cmath>

#include "lswe/errors.hpp"

namespace lswe {

namespace {

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

std::size_t pair_count(int n) { return sz(n) * sz(n + 1) / 2; }

std::size_t triple_count(int n) { return sz(n) * sz(n + 1) * sz(n + 2) / 6; }

/** Truncated Taylor value with packed symmetric derivative storage. */
struct Jet {
  int n = 0;
  int order = 1;
  double v = 0.0;
  std::vector<double> g;  // N
  std::vector<double> h;  // packed i <= j
  std::vector<double> t;  // packed i <= j <= k

  static Jet zeros(int n, int order) {
    Jet j;
    j.n = n;
    j.order = order;
    j.g.assign(sz(n), 0.0);
    if (order >= 2) j.h.assign(pair_count(n), 0.0);
    if (order >= 3) j.t.assign(triple_count(n), 0.0);
    return j;
  }

  double hval(int i, int j) const { return h[TaylorJet::hess_index(i, j, n)]; }
  double tval(int i, int j, int k) const { return t[TaylorJet::third_index(i, j, k, n)]; }
};

Jet constant_jet(double v, int n, int order) {
  Jet j = Jet::zeros(n, order);
  j.v = v;
  return j;
}

Jet variable_jet(int index1, double value, int n, int order) {
  Jet j = Jet::zeros(n, order);
  j.v = value;
  j.g[sz(index1 - 1)] = 1.0;
  return j;
}

Jet add(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v += b.v;
  for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
  for (std::size_t i = 0; i < r.h.size(); ++i) r.h[i] += b.h[i];
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] += b.t[i];
  return r;
}

Jet sub(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v -= b.v;
  for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
  for (std::size_t i = 0; i < r.h.size(); ++i) r.h[i] -= b.h[i];
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] -= b.t[i];
  return r;
}

Jet neg(const Jet& a) {
  Jet r = a;
  r.v = -r.v;
  for (auto& x : r.g) x = -x;
  for (auto& x : r.h) x = -x;
  for (auto& x : r.t) x = -x;
  return r;
}

/** Leibniz product rule through third order. */
Jet mul(const Jet& a, const Jet& b) {
  Jet r = Jet::zeros(a.n, a.order);
  r.v = a.v * b.v;
  for (int i = 0; i < a.n; ++i) {
    r.g[sz(i)] = a.g[sz(i)] * b.v + a.v * b.g[sz(i)];
  }
  if (a.order >= 2) {
    for (int i = 0; i < a.n; ++i) {
      for (int j = i; j < a.n; ++j) {
        r.h[TaylorJet::hess_index(i, j, a.n)] = a.hval(i, j) * b.v + a.g[sz(i)] * b.g[sz(j)] +
                                                a.g[sz(j)] * b.g[sz(i)] + a.v * b.hval(i, j);
      }
    }
  }
  if (a.order >= 3) {
    for (int i = 0; i < a.n; ++i) {
      for (int j = i; j < a.n; ++j) {
        for (int k = j; k < a.n; ++k) {
          double s = a.tval(i, j, k) * b.v + a.v * b.tval(i, j, k);
          s += a.hval(i, j) * b.g[sz(k)] + a.hval(i, k) * b.g[sz(j)] + a.hval(j, k) * b.g[sz(i)];
          s += a.g[sz(i)] * b.hval(j, k) + a.g[sz(j)] * b.hval(i, k) + a.g[sz(k)] * b.hval(i, j);
          r.t[TaylorJet::third_index(i, j, k, a.n)] = s;
        }
      }
    }
  }
  return r;
}

/**
 * Compose an analytic scalar function into a jet:
 *   u = phi(f),  with d[m] = phi^(m)(f.v) for m = 0..3.
 */
Jet chain(const Jet& f, const double d[4]) {
  Jet r = Jet::zeros(f.n, f.order);
  r.v = d[0];
  for (int i = 0; i < f.n; ++i) {
    r.g[sz(i)] = d[1] * f.g[sz(i)];
  }
  if (f.order >= 2) {
    for (int i = 0; i < f.n; ++i) {
      for (int j = i; j < f.n; ++j) {
        r.h[TaylorJet::hess_index(i, j, f.n)] =
            d[2] * f.g[sz(i)] * f.g[sz(j)] + d[1] * f.hval(i, j);
      }
    }
  }
  if (f.order >= 3) {
    for (int i = 0; i < f.n; ++i) {
      for (int j = i; j < f.n; ++j) {
        for (int k = j; k < f.n; ++k) {
          double s = d[3] * f.g[sz(i)] * f.g[sz(j)] * f.g[sz(k)];
          s += d[2] * (f.hval(i, j) * f.g[sz(k)] + f.hval(i, k) * f.g[sz(j)] +
                       f.hval(j, k) * f.g[sz(i)]);
          s += d[1] * f.tval(i, j, k);
          r.t[TaylorJet::third_index(i, j, k, f.n)] = s;
        }
      }
    }
  }
  return r;
}

Jet reciprocal(const Jet& f) {
  if (f.v == 0.0) throw DomainError("division by zero");
  double x = f.v;
  double d[4] = {1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x)};
  return chain(f, d);
}

Jet int_pow(const Jet& base, long long e) {
  if (e == 0) return constant_jet(1.0, base.n, base.order);
  bool invert = e < 0;
  unsigned long long m = invert ? static_cast<unsigned long long>(-e)
                                : static_cast<unsigned long long>(e);
  Jet acc = constant_jet(1.0, base.n, base.order);
  Jet sq = base;
  bool acc_used = false;
  while (m > 0) {
    if (m & 1ull) {
      acc = acc_used ? mul(acc, sq) : sq;
      acc_used = true;
    }
    m >>= 1;
    if (m > 0) sq = mul(sq, sq);
  }
  return invert ? reciprocal(acc) : acc;
}

Jet call_jet(FuncId f, const Jet& x) {
  double v = x.v;
  double d[4];
  switch (f) {
    case FuncId::sin:
      d[0] = std::sin(v);
      d[1] = std::cos(v);
      d[2] = -d[0];
      d[3] = -d[1];
      break;
    case FuncId::cos:
      d[0] = std::cos(v);
      d[1] = -std::sin(v);
      d[2] = -d[0];
      d[3] = -d[1];
      break;
    case FuncId::exp:
      d[0] = d[1] = d[2] = d[3] = std::exp(v);
      break;
    case FuncId::log:
      if (v <= 0.0) throw DomainError("log of non-positive argument");
      d[0] = std::log(v);
      d[1] = 1.0 / v;
      d[2] = -1.0 / (v * v);
      d[3] = 2.0 / (v * v * v);
      break;
    case FuncId::sqrt: {
      if (v <= 0.0) throw DomainError("sqrt derivative needs a positive argument");
      double r = std::sqrt(v);
      d[0] = r;
      d[1] = 0.5 / r;
      d[2] = -0.25 / (v * r);
      d[3] = 0.375 / (v * v * r);
      break;
    }
    case FuncId::tanh: {
      double th = std::tanh(v);
      double sech2 = 1.0 - th * th;
      d[0] = th;
      d[1] = sech2;
      d[2] = -2.0 * th * sech2;
      d[3] = -2.0 * sech2 * (1.0 - 3.0 * th * th);
      break;
    }
    default:
      throw Error("unreachable function id");
  }
  return chain(x, d);
}

Jet pow_jet(const Jet& base, const ExprNode& exponent, const Jet& exponent_jet) {
  if (exponent.kind == NodeKind::constant) {
    double e = exponent.number;
    double rounded = std::nearbyint(e);
    if (e == rounded && std::abs(e) < 9.0e15) {
      return int_pow(base, static_cast<long long>(rounded));
    }
    if (base.v <= 0.0) {
      throw DomainError("non-integer power of a non-positive base");
    }
    double x = base.v;
    double d[4] = {std::pow(x, e), e * std::pow(x, e - 1.0), e * (e - 1.0) * std::pow(x, e - 2.0),
                   e * (e - 1.0) * (e - 2.0) * std::pow(x, e - 3.0)};
    return chain(base, d);
  }
  // Variable exponent: f^g = exp(g log f), valid for f > 0.
  if (base.v <= 0.0) {
    throw DomainError("non-constant power of a non-positive base");
  }
  return call_jet(FuncId::exp, mul(exponent_jet, call_jet(FuncId::log, base)));
}

Jet eval_jet(const ExprNode& node, std::span<const double> point, int n, int order) {
  switch (node.kind) {
    case NodeKind::constant:
      return constant_jet(node.number, n, order);
    case NodeKind::variable:
      return variable_jet(node.index, point[sz(node.index - 1)], n, order);
    case NodeKind::add:
      return add(eval_jet(*node.lhs, point, n, order), eval_jet(*node.rhs, point, n, order));
    case NodeKind::sub:
      return sub(eval_jet(*node.lhs, point, n, order), eval_jet(*node.rhs, point, n, order));
    case NodeKind::mul:
      return mul(eval_jet(*node.lhs, point, n, order), eval_jet(*node.rhs, point, n, order));
    case NodeKind::div:
      return mul(eval_jet(*node.lhs, point, n, order),
                 reciprocal(eval_jet(*node.rhs, point, n, order)));
    case NodeKind::pow: {
      Jet base = eval_jet(*node.lhs, point, n, order);
      if (node.rhs->kind == NodeKind::constant) {
        Jet dummy = constant_jet(node.rhs->number, n, order);
        return pow_jet(base, *node.rhs, dummy);
      }
      Jet expo = eval_jet(*node.rhs, point, n, order);
      return pow_jet(base, *node.rhs, expo);
    }
    case NodeKind::neg:
      return neg(eval_jet(*node.lhs, point, n, order));
    case NodeKind::call:
      return call_jet(node.func, eval_jet(*node.lhs, point, n, order));
  }
  throw Error("unreachable node kind");
}

}  // namespace

std::size_t TaylorJet::hess_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return sz(i) * sz(n) - sz(i) * sz(i - 1) / 2 + sz(j - i);
}

std::size_t TaylorJet::third_index(int i, int j, int k, int n) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  // Triples starting below i, then the (j,k) pair inside the (n - i)-sized tail.
  std::size_t base = 0;
  for (int a = 0; a < i; ++a) base += pair_count(n - a);
  return base + hess_index(j - i, k - i, n - i);
}

TaylorJet derive(const PotentialExpr& expr, std::span<const double> point, int order) {
  if (order < 1 || order > 3) {
    throw ValidationError("derive order must be 1, 2 or 3");
  }
  if (static_cast<int>(point.size()) != expr.dimension()) {
    throw ValidationError("point size does not match expression dimension");
  }
  int n = expr.dimension();
  Jet j = eval_jet(*expr.root(), point, n, order);

  TaylorJet out;
  out.dimension = n;
  out.order = order;
  out.value = j.v;
  out.gradient = std::move(j.g);
  out.hessian = std::move(j.h);
  out.third = std::move(j.t);
  return out;
}

}  // namespace lswe
