// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/types.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace pappus::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline constexpr int max_gauss_order = 64;

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached rule of order 1..64. Thread-safe (static initialisation).
inline const GaussRule& gauss_legendre(int n) {
  static const std::array<GaussRule, max_gauss_order + 1> table = [] {
    std::array<GaussRule, max_gauss_order + 1> t;
    t[1] = GaussRule{{0.0}, {2.0}};
    for (int k = 2; k <= max_gauss_order; ++k) t[k] = detail::compute_gauss_legendre(k);
    return t;
  }();
  if (n < 1 || n > max_gauss_order) throw ValidationError("Gauss-Legendre order out of range");
  return table[n];
}

/// Nodes and weights of a composite rule (`panels` equal panels of `order` points).
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

inline NodeSet composite_gauss(double a, double b, int panels, int order) {
  if (panels < 1) throw ValidationError("composite rule needs at least one panel");
  const GaussRule& g = gauss_legendre(order);
  NodeSet out;
  out.x.reserve(static_cast<std::size_t>(panels) * order);
  out.w.reserve(out.x.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int k = 0; k < order; ++k) {
      out.x.push_back(mid + 0.5 * h * g.x[k]);
      out.w.push_back(0.5 * h * g.w[k]);
    }
  }
  return out;
}

template <class F>
double gauss_panel(F&& f, double a, double b, int order) {
  const GaussRule& g = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < order; ++k) sum += g.w[k] * f(mid + half * g.x[k]);
  return half * sum;
}

struct AdaptiveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int order = 8;
  int max_panels = 2000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int panels = 0;
};

/// Globally adaptive Gauss-Legendre: the panel with the largest error
/// estimate (coarse rule vs. the rule on its two halves) is split until the
/// summed estimate is below max(abs_tol, rel_tol * |I|).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  auto make = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double coarse = gauss_panel(f, lo, hi, opt.order);
    const double fine = gauss_panel(f, lo, mid, opt.order) + gauss_panel(f, mid, hi, opt.order);
    return Panel{lo, hi, fine, std::abs(fine - coarse)};
  };
  std::priority_queue<Panel> heap;
  heap.push(make(a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  int count = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && count < opt.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;  // panel too small to split
    }
    Panel left = make(worst.a, mid), right = make(mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum in ascending position for reproducibility of the last bits.
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  res.value = 0.0;
  res.error = 0.0;
  for (const auto& p : all) {
    res.value += p.value;
    res.error += p.error;
  }
  res.panels = static_cast<int>(all.size());
  res.converged = res.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
  return res;
}

/// Trapezoidal rule of an equispaced periodic sample over one period.
inline double periodic_trapezoid(std::span<const double> f, double period = 2.0 * pi) {
  double sum = 0.0;
  for (double v : f) sum += v;
  return sum * period / static_cast<double>(f.size());
}

/// Spectral derivative of an equispaced periodic real sample (even length).
/// The Nyquist mode is dropped.
inline std::vector<double> periodic_derivative(std::span<const double> f, double period = 2.0 * pi) {
  const std::size_t m = f.size();
  std::vector<double> cos_t(m), sin_t(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
    cos_t[j] = std::cos(a);
    sin_t[j] = std::sin(a);
  }
  const std::size_t kmax = (m % 2 == 0) ? m / 2 - 1 : m / 2;
  std::vector<double> re(kmax + 1, 0.0), im(kmax + 1, 0.0);
  for (std::size_t k = 1; k <= kmax; ++k) {
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t idx = (j * k) % m;
      sr += f[j] * cos_t[idx];
      si -= f[j] * sin_t[idx];
    }
    re[k] = sr;
    im[k] = si;
  }
  const double scale = 2.0 * pi / period;
  std::vector<double> d(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const std::size_t idx = (j * k) % m;
      // d/dphi of (re + i im) e^{ik phi} + c.c., real part
      sum += static_cast<double>(k) * (-re[k] * sin_t[idx] - im[k] * cos_t[idx]);
    }
    d[j] = 2.0 * sum * scale / static_cast<double>(m);
  }
  return d;
}

/// Finite-difference weights for the `order`-th derivative at `x0` from the
/// stencil `xs` (Fornberg's recursion).
inline std::vector<double> fd_weights(double x0, std::span<const double> xs, int order) {
  const int n = static_cast<int>(xs.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][order];
  return w;
}

/// First index of a `width`-point stencil centred on `i` within [0, n).
inline std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t width) {
  const std::size_t half = width / 2;
  if (n <= width) return 0;
  if (i < half) return 0;
  if (i + half >= n) return n - width;
  return i - half;
}

}  // namespace pappus::quad
