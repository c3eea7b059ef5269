#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>

#include <Eigen/Dense>

namespace memkernel {

/// Truncated bivariate Taylor polynomial about a surface point.
/// Stores c_ij = (1/(i! j!)) d1^i d2^j f for i + j <= N.
template <int N>
struct Jet {
  static_assert(N >= 0 && N <= 6);
  static constexpr int order = N;
  static constexpr int size = (N + 1) * (N + 2) / 2;

  static constexpr int index(int i, int j) {
    const int d = i + j;
    return d * (d + 1) / 2 + j;
  }

  std::array<double, size> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }  // NOLINT: implicit lift of constants is intended

  static Jet variable(double v, int axis) {
    Jet r(v);
    if constexpr (N >= 1) r.c[axis == 0 ? index(1, 0) : index(0, 1)] = 1.0;
    return r;
  }

  double value() const { return c[0]; }

  double partial(int i, int j) const { return c[index(i, j)] * factorial(i) * factorial(j); }
  void set_partial(int i, int j, double v) { c[index(i, j)] = v / (factorial(i) * factorial(j)); }

  static constexpr double factorial(int k) {
    double f = 1.0;
    for (int q = 2; q <= k; ++q) f *= q;
    return f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < size; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < size; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator+=(double s) {
    c[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    for (auto& x : c) x /= s;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend Jet operator+(const Jet& a) { return a; }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int d = 0; d <= N; ++d)
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        double s = 0.0;
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l) s += a.c[index(k, l)] * b.c[index(i - k, j - l)];
        r.c[index(i, j)] = s;
      }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
  friend Jet operator/(double s, const Jet& b) { return s * inverse(b); }

  friend bool operator==(const Jet& a, const Jet& b) { return a.c == b.c; }
};

/// f(x0 + d) = sum_k t[k] d^k, where t[k] = f^(k)(x0)/k!.
template <int N>
Jet<N> compose(const Jet<N>& x, const std::array<double, N + 1>& t) {
  Jet<N> d = x;
  d.c[0] = 0.0;
  Jet<N> r(t[N]);
  for (int k = N - 1; k >= 0; --k) r = r * d + t[k];
  return r;
}

template <int N>
Jet<N> inverse(const Jet<N>& x) {
  std::array<double, N + 1> t{};
  const double v = x.value();
  double p = 1.0 / v;
  for (int k = 0; k <= N; ++k) {
    t[k] = p;
    p *= -1.0 / v;
  }
  return compose(x, t);
}

template <int N>
Jet<N> sqrt(const Jet<N>& x) {
  std::array<double, N + 1> t{};
  const double v = x.value();
  const double s = std::sqrt(v);
  double binom = 1.0;  // binom(1/2, k)
  double p = s;        // v^(1/2 - k)
  for (int k = 0; k <= N; ++k) {
    t[k] = binom * p;
    binom *= (0.5 - k) / (k + 1);
    p /= v;
  }
  return compose(x, t);
}

template <int N>
Jet<N> sin(const Jet<N>& x) {
  std::array<double, N + 1> t{};
  for (int k = 0; k <= N; ++k)
    t[k] = std::sin(x.value() + k * std::numbers::pi / 2) / Jet<N>::factorial(k);
  return compose(x, t);
}

template <int N>
Jet<N> cos(const Jet<N>& x) {
  std::array<double, N + 1> t{};
  for (int k = 0; k <= N; ++k)
    t[k] = std::cos(x.value() + k * std::numbers::pi / 2) / Jet<N>::factorial(k);
  return compose(x, t);
}

template <int N>
Jet<N> exp(const Jet<N>& x) {
  std::array<double, N + 1> t{};
  const double e = std::exp(x.value());
  for (int k = 0; k <= N; ++k) t[k] = e / Jet<N>::factorial(k);
  return compose(x, t);
}

template <int N>
Jet<N> abs(const Jet<N>& x) {
  return x.value() < 0 ? -x : x;
}

/// d/d xi^(axis+1), losing one order.
template <int N>
Jet<N - 1> derivative(const Jet<N>& f, int axis) {
  static_assert(N >= 1);
  Jet<N - 1> r;
  for (int d = 0; d <= N - 1; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      r.c[Jet<N - 1>::index(i, j)] = axis == 0 ? (i + 1) * f.c[Jet<N>::index(i + 1, j)]
                                               : (j + 1) * f.c[Jet<N>::index(i, j + 1)];
    }
  return r;
}

template <int M, int N>
Jet<M> truncate(const Jet<N>& f) {
  static_assert(M <= N);
  Jet<M> r;
  for (int k = 0; k < Jet<M>::size; ++k) r.c[k] = f.c[k];
  return r;
}

/// Scalar-generic helpers so kernels can be written once for double and Jet<N>.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) {
  return x.value();
}

template <class S>
struct scalar_order : std::integral_constant<int, 0> {};
template <int N>
struct scalar_order<Jet<N>> : std::integral_constant<int, N> {};

/// Lift a high-order jet to scalar type S (a plain floating type keeps only the value).
template <class S, int N>
S lift(const Jet<N>& f) {
  if constexpr (std::is_floating_point_v<S>)
    return S(f.value());
  else
    return truncate<S::order>(f);
}

/// First partial of a high-order jet, delivered as scalar type S.
template <class S, int N>
S lift_derivative(const Jet<N>& f, int axis) {
  return lift<S>(derivative(f, axis));
}

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

}  // namespace memkernel

namespace Eigen {

template <int N>
struct NumTraits<memkernel::Jet<N>> : NumTraits<double> {
  using Real = memkernel::Jet<N>;
  using NonInteger = memkernel::Jet<N>;
  using Nested = memkernel::Jet<N>;
  using Literal = memkernel::Jet<N>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = memkernel::Jet<N>::size,
    AddCost = memkernel::Jet<N>::size,
    MulCost = memkernel::Jet<N>::size * memkernel::Jet<N>::size
  };
  static Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static Real dummy_precision() { return Real(1e-12); }
  static Real highest() { return Real(std::numeric_limits<double>::max()); }
  static Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static int digits10() { return NumTraits<double>::digits10(); }
};

template <int N, typename BinaryOp>
struct ScalarBinaryOpTraits<memkernel::Jet<N>, double, BinaryOp> {
  using ReturnType = memkernel::Jet<N>;
};
template <int N, typename BinaryOp>
struct ScalarBinaryOpTraits<double, memkernel::Jet<N>, BinaryOp> {
  using ReturnType = memkernel::Jet<N>;
};

}  // namespace Eigen
