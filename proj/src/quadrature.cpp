#include "uniwkb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "uniwkb/error.hpp"

namespace uniwkb {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 10-point weights belong to the odd-indexed abscissae.
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478126, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a = 0.0;
  double b = 0.0;
  int depth = 0;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> resabs;
};

using VecFn = std::function<void(double, double*)>;

Panel gk21(const VecFn& f, int dim, double a, double b, int depth) {
  Panel p{a, b, depth, std::vector<double>(dim), std::vector<double>(dim),
          std::vector<double>(dim)};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::vector<double> fv(21 * dim);
  for (int j = 0; j < 10; ++j) {
    f(c - h * kXgk[j], &fv[(2 * j) * dim]);
    f(c + h * kXgk[j], &fv[(2 * j + 1) * dim]);
  }
  f(c, &fv[20 * dim]);
  for (int k = 0; k < dim; ++k) {
    const double fc = fv[20 * dim + k];
    double resk = kWgk[10] * fc;
    double resg = 0.0;
    double resabs = kWgk[10] * std::abs(fc);
    for (int j = 0; j < 10; ++j) {
      const double f1 = fv[(2 * j) * dim + k], f2 = fv[(2 * j + 1) * dim + k];
      resk += kWgk[j] * (f1 + f2);
      resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
      resasc += kWgk[j] * (std::abs(fv[(2 * j) * dim + k] - mean) +
                           std::abs(fv[(2 * j + 1) * dim + k] - mean));
    }
    double err = std::abs((resk - resg) * h);
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
      err = std::max(50.0 * kEps * resabs, err);
    }
    if (!std::isfinite(resk)) throw DomainError("integrand is not finite");
    p.value[k] = resk * h;
    p.error[k] = err;
    p.resabs[k] = resabs;
  }
  return p;
}

// `edges` is the sorted initial partition, endpoints included.
std::vector<Panel> adapt(const VecFn& f, int dim, const std::vector<double>& edges,
                         const QuadratureSpec& spec) {
  if (spec.rel_tol < 1e-13) throw DomainError("rel_tol must be at least 1e-13");
  const double a = edges.front(), b = edges.back();
  std::vector<Panel> panels;
  std::vector<double> total(dim, 0.0), err(dim, 0.0), absum(dim, 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push_back(gk21(f, dim, edges[i], edges[i + 1], 0));
    for (int k = 0; k < dim; ++k) {
      total[k] += panels.back().value[k];
      err[k] += panels.back().error[k];
      absum[k] += panels.back().resabs[k];
    }
  }

  auto tolerance = [&](int k) {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total[k]), 100.0 * kEps * absum[k]});
  };
  auto score = [&](const Panel& p) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s = std::max(s, p.error[k] / tolerance(k));
    return s;
  };
  // Scores are frozen at push time; they only steer the splitting order.
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push({score(panels[i]), i});

  for (;;) {
    bool done = true;
    for (int k = 0; k < dim; ++k) done = done && err[k] <= tolerance(k);
    if (done) break;
    if (heap.empty() || static_cast<int>(panels.size()) >= spec.max_intervals) {
      throw ConvergenceError("adaptive quadrature did not reach the requested tolerance on [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const std::size_t i = heap.top().second;
    heap.pop();
    if (panels[i].depth >= spec.max_depth) continue;  // frozen: its error stays in the total
    const Panel parent = panels[i];
    const double mid = 0.5 * (parent.a + parent.b);
    Panel left = gk21(f, dim, parent.a, mid, parent.depth + 1);
    Panel right = gk21(f, dim, mid, parent.b, parent.depth + 1);
    for (int k = 0; k < dim; ++k) {
      total[k] += left.value[k] + right.value[k] - parent.value[k];
      err[k] += left.error[k] + right.error[k] - parent.error[k];
      absum[k] += left.resabs[k] + right.resabs[k] - parent.resabs[k];
    }
    panels[i] = std::move(left);
    panels.push_back(std::move(right));
    heap.push({score(panels[i]), i});
    heap.push({score(panels.back()), panels.size() - 1});
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  return panels;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
  if (a == b) return {};
  const VecFn g = [&f](double x, double* out) { out[0] = f(x); };
  const std::vector<Panel> panels = adapt(g, 1, {a, b}, spec);
  QuadResult r;
  for (const Panel& p : panels) {
    r.value += p.value[0];
    r.error += p.error[0];
  }
  r.intervals = static_cast<int>(panels.size());
  return r;
}

std::vector<double> integrate_vector(const std::function<void(double, double*)>& f, int dim,
                                     double a, double b, const QuadratureSpec& spec) {
  std::vector<double> total(dim, 0.0);
  if (a == b) return total;
  for (const Panel& p : adapt(f, dim, {a, b}, spec)) {
    for (int k = 0; k < dim; ++k) total[k] += p.value[k];
  }
  return total;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre requires n >= 1");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

const GaussRule& gauss_legendre_20() {
  static const GaussRule rule = gauss_legendre(20);
  return rule;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double a, double b,
                                       const QuadratureSpec& spec, std::vector<double> cuts)
    : f_(std::move(f)) {
  if (!(a <= b)) throw DomainError("CumulativeIntegral requires a <= b");
  edges_ = {a};
  cumulative_ = {0.0};
  if (a == b) return;
  for (int i = 1; i < kCumulativeSeedPanels; ++i) cuts.push_back(a + (b - a) * i / kCumulativeSeedPanels);
  std::erase_if(cuts, [&](double c) { return !(c > a && c < b); });
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const VecFn g = [this](double x, double* out) { out[0] = f_(x); };
  double running = 0.0;
  for (const Panel& p : adapt(g, 1, cuts, spec)) {
    running += p.value[0];
    edges_.push_back(p.b);
    cumulative_.push_back(running);
  }
  edges_.back() = b;
}

double CumulativeIntegral::operator()(double x) const {
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return cumulative_.back();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  const double lo = edges_[i];
  if (x == lo) return cumulative_[i];
  const GaussRule& g = gauss_legendre_20();
  const double c = 0.5 * (lo + x), h = 0.5 * (x - lo);
  double s = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) s += g.weights[k] * f_(c + h * g.nodes[k]);
  return cumulative_[i] + s * h;
}

double brent_root(const std::function<double(double)>& f, double a, double b, double xtol,
                  double rtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw DomainError("brent_root: interval does not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * rtol * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("brent_root did not converge");
}

}  // namespace uniwkb
