#include "qsq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsq/errors.hpp"

namespace qsq {
namespace {

constexpr double kPi = std::numbers::pi;

double log_fixed_bound(double beta_h, int d, double gamma) {
  return std::log(4.0) + beta_h / gamma - 0.5 * d * (1.0 - gamma);
}

// Powers z^j for j = -(d-1)..(d-1) as one Vandermonde row per point.
ComplexMatrix laurent_basis(const std::vector<Complex>& points, int d) {
  const int deg = d - 1;
  ComplexMatrix a(static_cast<Eigen::Index>(points.size()), 2 * deg + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Complex z = points[i];
    a(row, deg) = 1.0;
    Complex up = 1.0, down = 1.0;
    for (int j = 1; j <= deg; ++j) {
      up *= z;
      down *= std::conj(z);
      a(row, deg + j) = up;
      a(row, deg - j) = down;
    }
  }
  return a;
}

// Log-barrier method for min t subject to |f_i - (A alpha)_i| <= t. The
// variables are y = (Re alpha, Im alpha, t); `start` only needs to be finite.
// f is assumed scaled so that max |f_i| = 1, and the loop stops once the
// duality gap m / mu is below `gap`.
ComplexVector barrier_minimax(const ComplexMatrix& a, const ComplexVector& f, const ComplexVector& start,
                              double gap) {
  const Eigen::Index m = a.rows(), n = a.cols(), nv = 2 * n + 1;
  RealMatrix g(2 * m, 2 * n);
  g << a.real(), -a.imag(), a.imag(), a.real();
  RealVector u(2 * m);
  u << f.real(), f.imag();

  RealVector y(nv);
  y << start.real(), start.imag(), 0.0;
  auto residuals = [&](const RealVector& v) -> RealVector { return u - g * v.head(2 * n); };
  auto slack = [&](const RealVector& r, double t, Eigen::Index i) {
    const double norm = std::hypot(r(i), r(m + i));
    return (t - norm) * (t + norm);
  };
  auto objective = [&](const RealVector& v, double mu, bool* feasible) {
    const RealVector r = residuals(v);
    const double t = v(nv - 1);
    double sum = mu * t;
    *feasible = t > 0.0;
    for (Eigen::Index i = 0; i < m && *feasible; ++i) {
      const double s = slack(r, t, i);
      if (!(s > 0.0)) *feasible = false;
      else sum -= std::log(s);
    }
    return sum;
  };

  y(nv - 1) = 1.1 * residuals(y).reshaped(m, 2).rowwise().norm().maxCoeff() + 1e-3;
  double mu = static_cast<double>(m) / y(nv - 1);

  RealVector grad(nv), step(nv), gi(nv);
  RealMatrix hess(nv, nv);
  while (true) {
    for (int newton = 0; newton < 100; ++newton) {
      const RealVector r = residuals(y);
      const double t = y(nv - 1);
      grad.setZero();
      grad(nv - 1) = mu;
      hess.setZero();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double s = slack(r, t, i);
        gi.head(2 * n) = 2.0 * (g.row(i).transpose() * r(i) + g.row(m + i).transpose() * r(m + i));
        gi(nv - 1) = 2.0 * t;
        grad -= gi / s;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(gi, 1.0 / (s * s));
        hess.topLeftCorner(2 * n, 2 * n).noalias() +=
            (2.0 / s) * (g.row(i).transpose() * g.row(i) + g.row(m + i).transpose() * g.row(m + i));
        hess(nv - 1, nv - 1) -= 2.0 / s;
      }
      hess.triangularView<Eigen::StrictlyUpper>() = hess.transpose();
      step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement) || decrement <= 1e-14) break;

      bool feasible = false;
      const double current = objective(y, mu, &feasible);
      double alpha = 1.0;
      bool moved = false;
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        const RealVector trial = y + alpha * step;
        const double value = objective(trial, mu, &feasible);
        if (feasible && value <= current - 0.25 * alpha * decrement) {
          y = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (static_cast<double>(m) / mu < gap) break;
    mu *= 8.0;
  }
  return y.head(n).cast<Complex>() + Complex(0.0, 1.0) * y.segment(n, n).cast<Complex>();
}

}  // namespace

LaurentApproximation fourier_coefficients(double beta, double dt, int d) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("Fourier baseline needs beta >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("Fourier baseline needs dt > 0");
  if (d < 1) throw ConfigError("Fourier baseline needs d >= 1");

  const int deg = d - 1;
  const double a = beta / dt;
  LaurentApproximation out;
  out.method = "fourier";
  out.coefficients.resize(static_cast<std::size_t>(2 * deg + 1));
  double captured = 0.0;
  for (int j = -deg; j <= deg; ++j) {
    Complex c;
    if (a == 0.0) {
      c = j == 0 ? 1.0 : 0.0;
    } else {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      c = sign * std::sinh(kPi * a) / (kPi * Complex(a, -static_cast<double>(j)));
    }
    out.coefficients[static_cast<std::size_t>(j + deg)] = c;
    captured += std::norm(c);
  }
  // Parseval: (1/2pi) int exp(2 a theta) dtheta = sinh(2 pi a) / (2 pi a).
  const double total = a == 0.0 ? 1.0 : std::sinh(2.0 * kPi * a) / (2.0 * kPi * a);
  out.error = std::sqrt(std::max(total - captured, 0.0));
  return out;
}

Complex estimate_from_moments(const MomentSequence& m, const LaurentApproximation& approx) {
  const int deg = approx.degree();
  if (deg > m.degree()) {
    throw ConfigError("approximation degree " + std::to_string(deg) + " exceeds moment degree " +
                      std::to_string(m.degree()));
  }
  Complex sum = 0.0;
  for (int j = -deg; j <= deg; ++j) sum += approx.coefficients[static_cast<std::size_t>(j + deg)] * m.at(j);
  return sum;
}

FixedBound fixed_laurent_bound(double beta, double h_norm, int d) {
  if (!(beta >= 0.0) || !(h_norm >= 0.0)) throw ConfigError("fixed bound needs beta, ||H|| >= 0");
  if (d < 0) throw ConfigError("fixed bound needs d >= 0");
  const double bh = beta * h_norm;
  auto f = [&](double g) { return log_fixed_bound(bh, d, g); };

  const double lo0 = 1e-9, hi0 = 1.0 - 1e-9;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = lo0, hi = hi0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  double best_g = 0.5 * (lo + hi);
  double best = f(best_g);
  for (double g : {lo0, hi0}) {
    if (f(g) < best) {
      best = f(g);
      best_g = g;
    }
  }
  return {std::exp(best), best_g, std::exp(best - bh)};
}

int fixed_laurent_degree(double beta, double h_norm, double gamma, double delta) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 4.0)) throw ConfigError("delta must lie in (0, 4)");
  if (!(beta >= 0.0) || !(h_norm >= 0.0)) throw ConfigError("fixed bound needs beta, ||H|| >= 0");
  return 2 * static_cast<int>(std::ceil(std::log(4.0 / delta) / (1.0 - gamma) + beta * h_norm / gamma));
}

LaurentApproximation minimax_laurent(const std::vector<Complex>& points, const std::vector<Complex>& values, int d,
                                     FitMethod method) {
  if (d < 1) throw ConfigError("Laurent fit needs d >= 1");
  if (points.size() != values.size()) throw ConfigError("points and values differ in length");
  if (points.empty()) throw ConfigError("Laurent fit needs at least one point");

  const ComplexMatrix a = laurent_basis(points, d);
  const auto m = a.rows();
  ComplexVector f(m);
  for (Eigen::Index i = 0; i < m; ++i) f(i) = values[static_cast<std::size_t>(i)];

  auto max_residual = [&](const ComplexVector& alpha) { return (f - a * alpha).cwiseAbs().maxCoeff(); };
  auto pack = [&](const ComplexVector& alpha, double err, const char* name) {
    LaurentApproximation out;
    out.method = name;
    out.coefficients.assign(alpha.data(), alpha.data() + alpha.size());
    out.error = err;
    return out;
  };

  if (m <= a.cols()) {
    const ComplexVector alpha = a.completeOrthogonalDecomposition().solve(f);
    return pack(alpha, max_residual(alpha), "interpolation");
  }

  RealVector w = RealVector::Constant(m, 1.0 / static_cast<double>(m));
  auto solve = [&](const RealVector& weights) -> ComplexVector {
    const RealVector s = weights.cwiseSqrt();
    return (s.asDiagonal() * a).colPivHouseholderQr().solve(s.asDiagonal() * f);
  };

  ComplexVector best = solve(w);
  double best_err = max_residual(best);
  if (method == FitMethod::kLeastSquares) return pack(best, best_err, "least_squares");

  if (method == FitMethod::kInteriorPoint) {
    const double scale = f.cwiseAbs().maxCoeff();
    if (scale == 0.0) return pack(ComplexVector::Zero(a.cols()), 0.0, "interior_point");
    const ComplexVector alpha = barrier_minimax(a, f / scale, best / scale, 1e-12) * scale;
    const double err = max_residual(alpha);
    if (err < best_err) return pack(alpha, err, "interior_point");
    return pack(best, best_err, "interior_point");
  }

  double prev = best_err;
  ComplexVector alpha = best;
  for (int iter = 0; iter < 500; ++iter) {
    const RealVector r = (f - a * alpha).cwiseAbs();
    w = w.cwiseProduct(r);
    const double total = w.sum();
    if (!(total > 0.0)) break;  // zero residual everywhere
    w /= total;
    alpha = solve(w);
    const double err = max_residual(alpha);
    if (err < best_err) {
      best_err = err;
      best = alpha;
    }
    if (std::abs(err - prev) <= 1e-12 * std::max(err, std::numeric_limits<double>::min())) break;
    prev = err;
  }
  return pack(best, best_err, "lawson");
}

LaurentApproximation optimal_laurent(const SpectralData& spectrum, const SpectralFunction& f, int d,
                                     const OptimalLaurentOptions& options) {
  RealVector pop;
  if (options.support == FitSupport::kStateSupport) {
    if (options.state == nullptr) throw ConfigError("support-restricted fit needs a state");
    pop = eigen_populations(spectrum, *options.state);
  }

  // Energies are ascending, so equal eigenvalues of U are adjacent.
  std::vector<Complex> points, values;
  double cluster_weight = 0.0;
  double last_energy = 0.0;
  auto flush = [&] {
    if (options.support == FitSupport::kStateSupport && cluster_weight <= options.support_threshold) {
      points.pop_back();
    }
  };
  for (Eigen::Index k = 0; k < spectrum.energies.size(); ++k) {
    const double e = spectrum.energies(k);
    const bool same = k > 0 && e - last_energy < options.degeneracy_tol;
    if (!same) {
      if (k > 0) flush();
      points.push_back(energy_to_node(e, spectrum.dt));
      cluster_weight = 0.0;
    }
    if (pop.size() > 0) cluster_weight += pop(k);
    last_energy = e;
  }
  if (!points.empty()) flush();
  if (points.empty()) throw ConfigError("no eigenvalues left to fit");

  values.reserve(points.size());
  for (const Complex& z : points) values.push_back(f(z));
  LaurentApproximation out = minimax_laurent(points, values, d, options.method);
  out.method = "optimal_laurent_" + out.method;
  return out;
}

}  // namespace qsq
