#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "fields.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/ineqlab.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

namespace {

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

// Minimises f over s in [lo, hi]: coarse scan then golden section.
template <class F>
std::pair<double, double> scan_minimum(F f, double lo, double hi, int points) {
  std::vector<double> s(points), v(points);
  int best = 0;
  for (int k = 0; k < points; ++k) {
    s[k] = lo + (hi - lo) * k / (points - 1);
    v[k] = f(s[k]);
    if (v[k] < v[best]) best = k;
  }
  double a = s[std::max(0, best - 1)], b = s[std::min(points - 1, best + 1)];
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 40; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  double sm = fc < fd ? c : d, fm = std::min(fc, fd);
  if (v[best] < fm) return {s[best], v[best]};
  return {sm, fm};
}

struct Gamma {
  std::vector<std::array<int, 3>> edges;  // endpoint, endpoint, midpoint node
  std::vector<double> length;
  double measure = 0.0;
};

Gamma collect_gamma(const Mesh& m, const P2Layout& layout, const std::function<bool(const Vec2&)>& on_gamma) {
  Gamma g;
  for (const auto& b : m.boundary) {
    if (!on_gamma(m.edge_midpoint(b.edge))) continue;
    int v0 = m.edges[b.edge][0], v1 = m.edges[b.edge][1];
    g.edges.push_back({v0, v1, layout.num_vertices + b.edge});
    g.length.push_back((m.vertices[v1] - m.vertices[v0]).norm());
    g.measure += g.length.back();
  }
  if (g.measure == 0.0) throw EmptyTracePart("trace part Gamma has zero measure");
  return g;
}

// int_Gamma |v| and its gradient (sign-weighted trace functional).
double trace_l1(const Gamma& g, const Vector& v, Vector* grad) {
  const auto& rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& n = g.edges[e];
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      double x = 0.5 * (rule.nodes[k] + 1.0), w = 0.5 * rule.weights[k] * g.length[e];
      double N0 = (1.0 - x) * (1.0 - 2.0 * x), N1 = x * (2.0 * x - 1.0), N2 = 4.0 * x * (1.0 - x);
      double val = v[n[0]] * N0 + v[n[1]] * N1 + v[n[2]] * N2;
      s += w * std::abs(val);
      if (grad) {
        double sg = val > 0.0 ? 1.0 : (val < 0.0 ? -1.0 : 0.0);
        (*grad)[n[0]] += w * sg * N0;
        (*grad)[n[1]] += w * sg * N1;
        (*grad)[n[2]] += w * sg * N2;
      }
    }
  }
  return s;
}

struct PoincareProblem {
  const detail::P2Fields& fields;
  const Gamma& gamma;
  double q;

  double evaluate(const Vector& v, Vector* grad) const {
    const auto& cache = fields.cache();
    const auto& layout = fields.layout();
    const int nt = static_cast<int>(layout.element_nodes.size());
    double a = 0.0, b = 0.0;
    Vector ga, gb, gt;
    if (grad) {
      ga = Vector::Zero(v.size());
      gb = Vector::Zero(v.size());
      gt = Vector::Zero(v.size());
    }
    for (int t = 0; t < nt; ++t)
      for (int k = 0; k < cache.points_per_element; ++k) {
        const auto& P = cache.at(t, k);
        double val = fields.scalar_value(v, t, k);
        Vec2 g = fields.scalar_gradient(v, t, k);
        double av = std::abs(val), ng = g.norm();
        a += P.weight * std::pow(av, q);
        b += P.weight * std::pow(ng, q);
        if (!grad) continue;
        double wa = av > 0.0 ? P.weight * std::pow(av, q - 2.0) * val : 0.0;
        double wb = ng > 0.0 ? P.weight * std::pow(ng, q - 2.0) : 0.0;
        const auto& nodes = layout.element_nodes[t];
        for (int i = 0; i < 6; ++i) {
          ga[nodes[i]] += wa * P.N[i];
          gb[nodes[i]] += wb * g.dot(P.dN[i]);
        }
      }
    double tr = trace_l1(gamma, v, grad ? &gt : nullptr);
    double na = std::pow(a, 1.0 / q), nb = std::pow(b, 1.0 / q);
    double den = nb + tr;
    if (grad) {
      Vector dna = a > 0.0 ? Vector(ga * (na / a)) : Vector::Zero(v.size());
      Vector dnb = b > 0.0 ? Vector(gb * (nb / b)) : Vector::Zero(v.size());
      *grad = dna / na - (dnb + gt) / den;
    }
    return std::log(na) - std::log(den);
  }
};

double ascend(const PoincareProblem& prob, Vector x, int steps) {
  Vector g;
  double f = prob.evaluate(x, &g);
  double step = 0.1 * x.norm() / std::max(g.norm(), 1e-300);
  for (int s = 0; s < steps; ++s) {
    bool moved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Vector y = x + step * g;
      Vector gy;
      double fy = prob.evaluate(y, &gy);
      if (std::isfinite(fy) && fy > f) {
        x = y / y.norm();
        step = 2.0 * step * y.norm();
        f = fy;
        g = gy * y.norm();
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return std::exp(f);
}

}  // namespace

InequalityReport poincare_constant(const Mesh& m, double q, const std::function<bool(const Vec2&)>& on_gamma,
                                   const SearchOptions& opts) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw BadExponent("Poincare exponent must satisfy q >= 1");
  detail::P2Fields fields(m);
  const P2Layout& layout = fields.layout();
  Gamma gamma = collect_gamma(m, layout, on_gamma);
  ScalarForms forms = assemble_scalar_forms(m, layout);
  Vector ell = boundary_trace(m, layout, on_gamma);
  const int n = layout.num_nodes;

  // Smallest eigenvalue of K / theta + ell ell^T / (1 - theta) against M by inverse iteration.
  Vector mode;
  auto lambda = [&](double s) {
    double theta = logistic(s);
    std::vector<Triplet> trips;
    for (int k = 0; k < forms.K.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(forms.K, k); it; ++it) trips.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < n; ++i)
      if (ell[i] != 0.0) {
        trips.emplace_back(i, n, ell[i]);
        trips.emplace_back(n, i, ell[i]);
      }
    trips.emplace_back(n, n, -(1.0 - theta) / theta);
    SparseMatrix A(n + 1, n + 1);
    A.setFromTriplets(trips.begin(), trips.end());
    SparseSolver solver;
    solver.factorize(A);
    Vector x = Vector::Ones(n), b = Vector::Zero(n + 1);
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
      b.head(n) = forms.M * x;
      x = solver.solve(b).head(n);
      x /= std::sqrt(x.dot(forms.M * x));
      double l = x.dot(forms.K * x) / theta + std::pow(ell.dot(x), 2) / (1.0 - theta);
      bool done = it > 0 && std::abs(l - lam) <= 1e-14 * l;
      lam = l;
      if (done) break;
    }
    mode = x;
    return lam;
  };
  auto [s_best, lam] = scan_minimum(lambda, -14.0, 14.0, 29);
  lambda(s_best);
  Vector vstar = mode;

  InequalityReport rep;
  rep.id = "poincare";
  rep.q = q;
  rep.h = m.h;
  rep.dofs = n;
  PoincareProblem prob{fields, gamma, q};
  rep.reference = 1.0 / std::sqrt(lam);
  if (q == 2.0) {
    rep.constant = std::exp(prob.evaluate(vstar, nullptr));
    rep.note = "theta scan with inverse iteration; reference is the bound with |int_Gamma v| in place of int_Gamma |v|";
    return rep;
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> starts{vstar / vstar.norm()};
  for (int k = 0; k < opts.trials; ++k) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = g(rng);
    starts.push_back(x.normalized());
  }
  std::vector<double> best(starts.size(), 0.0);
  parallel_for(static_cast<int>(starts.size()), opts.threads,
               [&](int k) { best[k] = ascend(prob, starts[k], opts.ascent_steps); });
  rep.reference = 0.0;
  for (double b : best) rep.constant = std::max(rep.constant, b);
  rep.trials = static_cast<int>(starts.size());
  rep.note = "maximum over the q = 2 extremal and random starts after local ascent";
  return rep;
}

double poincare_oracle(const Mesh& m, const std::function<bool(const Vec2&)>& on_gamma) {
  P2Layout layout(m);
  collect_gamma(m, layout, on_gamma);
  ScalarForms forms = assemble_scalar_forms(m, layout);
  Vector ell = boundary_trace(m, layout, on_gamma);
  Eigen::MatrixXd K = Eigen::MatrixXd(forms.K), M = Eigen::MatrixXd(forms.M);
  Eigen::MatrixXd L = ell * ell.transpose();
  auto lambda = [&](double s) {
    double theta = logistic(s);
    Eigen::MatrixXd A = K / theta + L / (1.0 - theta);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, M, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw LinearSolveFailure("Poincare eigenproblem failed");
    return eig.eigenvalues()[0];
  };
  auto best = scan_minimum(lambda, -14.0, 14.0, 29);
  return 1.0 / std::sqrt(best.second);
}

}  // namespace thickflow
