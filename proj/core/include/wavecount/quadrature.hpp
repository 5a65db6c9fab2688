#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for scalar, complex or Eigen-vector integrands.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace wavecount {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class T>
auto magnitude(const T& v) -> decltype(v.norm()) {
  return v.norm();
}

struct Gk15 {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

}  // namespace detail

template <class T>
struct QuadratureResult {
  T value;
  double error;
  int evaluations;
};

/// One G7/K15 panel on [a, b]; returns the Kronrod value and |K - G|.
template <class F>
auto gk15_panel(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = detail::Gk15::wk[7] * fc;
  T gauss = detail::Gk15::wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    T f1 = f(c - h * detail::Gk15::xk[j]);
    T f2 = f(c + h * detail::Gk15::xk[j]);
    kron = kron + detail::Gk15::wk[j] * (f1 + f2);
    if (j % 2 == 1) gauss = gauss + detail::Gk15::wg[j / 2] * (f1 + f2);
  }
  kron = h * kron;
  gauss = h * gauss;
  T diff = kron - gauss;
  return std::pair<T, double>{kron, detail::magnitude(diff)};
}

/// h * sum w_k |f(x_k)|; K - G differences below 50 eps times this are rounding noise.
template <class F>
double gk15_abs(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = detail::Gk15::wk[7] * detail::magnitude(f(c));
  for (int j = 0; j < 7; ++j)
    s += detail::Gk15::wk[j] *
         (detail::magnitude(f(c - h * detail::Gk15::xk[j])) + detail::magnitude(f(c + h * detail::Gk15::xk[j])));
  return std::fabs(h) * s;
}

/// Globally adaptive bisection until the summed error estimate is below
/// max(abs_tol, rel_tol * |value|). Panels whose estimate is at rounding level are
/// not split further; if only those remain the rounding floor is accepted.
/// Throws QuadratureError if max_panels is hit.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
               int max_panels = 20000) {
  using T = std::decay_t<decltype(f(a))>;
  struct Panel {
    double a, b;
    T value;
    double error;
    bool settled;
  };
  auto make = [&](double lo, double hi) {
    auto [v, e] = gk15_panel(f, lo, hi);
    bool settled = e <= 50 * std::numeric_limits<double>::epsilon() * gk15_abs(f, lo, hi);
    // no room left to bisect
    settled = settled || !(lo < 0.5 * (lo + hi) && 0.5 * (lo + hi) < hi);
    return Panel{lo, hi, v, e, settled};
  };
  std::vector<Panel> panels;
  panels.push_back(make(a, b));
  int evaluations = 30;
  for (;;) {
    T total = panels.front().value;
    double err = 0, open_err = 0;
    std::size_t worst = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (i > 0) total = total + panels[i].value;
      err += panels[i].error;
      if (panels[i].settled) continue;
      open_err += panels[i].error;
      if (worst == panels.size() || panels[i].error > panels[worst].error) worst = i;
    }
    const double tol = std::max(abs_tol, rel_tol * detail::magnitude(total));
    if (err <= tol || open_err <= 0.5 * tol || worst == panels.size())
      return QuadratureResult<T>{total, err, evaluations};
    if (static_cast<int>(panels.size()) >= max_panels)
      throw QuadratureError("integrate: no convergence (error " + std::to_string(err) +
                            " > tolerance " + std::to_string(tol) + ")");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = make(p.a, mid);
    panels.push_back(make(mid, p.b));
    evaluations += 60;
  }
}

}  // namespace wavecount
