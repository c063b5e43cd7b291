#include "cdcheck/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/curvature.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"

namespace cdcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct State {
  Eigen::MatrixXd E, P;
  double integral = 0.0;
};

State derivative(const State& s, double K) {
  State d;
  d.E = s.P;
  d.P = -K * s.E;
  d.P.row(s.E.rows() - 1).setZero();
  const Eigen::MatrixXd A = s.P * s.E.inverse();
  d.integral = A(s.E.rows() - 1, s.E.cols() - 1);
  return d;
}

State axpy(const State& s, double h, const State& d) {
  return {s.E + h * d.E, s.P + h * d.P, s.integral + h * d.integral};
}

double normalized(double lhs, double rhs) { return (lhs - rhs) / (1.0 + std::abs(rhs)); }

}  // namespace

JacobianTrajectory integrate_jacobi(const ModelSpace& space, const WeightFunction& weight,
                                    const DimensionParams& params, const TransportRay& ray,
                                    int steps) {
  const int n = space.dim();
  if (ray.S.rows() != n || ray.S.cols() != n) throw DimensionError("ray Hessian must be n x n");
  if (params.is_n_equal() && !weight.is_constant()) {
    throw ConfigError("N = n requires a constant weight, got " + weight.name());
  }
  if (steps < 8) throw ConfigError("at least 8 integration steps are required");

  JacobianTrajectory tr;
  tr.ray = ray;
  tr.speed = space.norm(ray.x, ray.w);
  tr.sectional = space.sectional();
  tr.c = params.c;
  tr.rate = params.reparam_rate();
  tr.ricci_tail = (params.N.is_infinite() || params.is_n_equal()) ? 0.0 : params.inverse_gap();

  const double f0 = weight.value(space, ray.x);
  const std::size_t m = static_cast<std::size_t>(steps) + 1;
  tr.t = linspace(0.0, 1.0, m);

  if (tr.speed == 0.0) {
    // No motion: the identity trajectory.
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < m; ++i) {
      tr.E.push_back(I);
      tr.dE.push_back(Eigen::MatrixXd::Zero(n, n));
      tr.det.push_back(1.0);
      tr.J.push_back(1.0);
      tr.h.push_back(0.0);
      tr.l.push_back(0.0);
      tr.D.push_back(1.0);
      tr.Dbar.push_back(1.0);
      tr.a_nn.push_back(0.0);
      tr.f.push_back(f0);
      tr.df.push_back(0.0);
      tr.d2f.push_back(0.0);
      tr.reparam.push_back(0.0);
    }
    return tr;
  }

  const Tangent v = ray.w / tr.speed;
  const double K = tr.sectional * tr.speed * tr.speed;
  const double hstep = 1.0 / steps;
  const bool flat_weight = weight.is_constant() || tr.rate == 0.0;
  auto arclength_weight = [&](double xi) {
    return std::exp(-tr.rate * weight.value(space, space.geodesic_point(ray.x, v, xi)));
  };

  State s{Eigen::MatrixXd::Identity(n, n), ray.S, 0.0};
  double cumulative = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = tr.t[i];
    if (i > 0) {
      const State k1 = derivative(s, K);
      const State k2 = derivative(axpy(s, 0.5 * hstep, k1), K);
      const State k3 = derivative(axpy(s, 0.5 * hstep, k2), K);
      const State k4 = derivative(axpy(s, hstep, k3), K);
      s.E += hstep / 6.0 * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E);
      s.P += hstep / 6.0 * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
      s.integral += hstep / 6.0 * (k1.integral + 2.0 * k2.integral + 2.0 * k3.integral + k4.integral);
      if (flat_weight) {
        cumulative = tr.speed * t * std::exp(-tr.rate * f0);
      } else {
        cumulative += adaptive_simpson(arclength_weight, tr.speed * tr.t[i - 1], tr.speed * t).value;
      }
    }
    const double det = s.E.determinant();
    if (!(det > 0.0)) {
      throw SingularJacobian("det(dF_t) = " + std::to_string(det) + " at t = " + std::to_string(t));
    }
    const Point p = space.geodesic_point(ray.x, v, tr.speed * t);
    const Tangent u = space.geodesic_velocity(ray.x, v, tr.speed * t);
    const double f = weight.value(space, p);
    const double h = std::log(det) - s.integral;
    const double l = h - f + f0;
    tr.E.push_back(s.E);
    tr.dE.push_back(s.P);
    tr.det.push_back(det);
    tr.J.push_back(std::exp(-f + f0) * det);
    tr.h.push_back(h);
    tr.l.push_back(l);
    tr.D.push_back(std::exp(params.c * l));
    tr.Dbar.push_back(std::exp(s.integral));
    tr.a_nn.push_back((s.P * s.E.inverse())(n - 1, n - 1));
    tr.f.push_back(f);
    tr.df.push_back(tr.speed * weight.slope(space, p, u));
    tr.d2f.push_back(tr.speed * tr.speed * weight.hess(space, p, u, u));
    tr.reparam.push_back(cumulative);
  }
  return tr;
}

double ricci_along(const JacobianTrajectory& tr, std::size_t) {
  const int n = static_cast<int>(tr.ray.S.rows());
  return (n - 1) * tr.sectional * tr.speed * tr.speed;
}

double ricci_fN_along(const JacobianTrajectory& tr, std::size_t i) {
  return ricci_along(tr, i) + tr.d2f[i] - tr.df[i] * tr.df[i] * tr.ricci_tail;
}

CheckReport check_riccati(const JacobianTrajectory& tr) {
  const int n = static_cast<int>(tr.ray.S.rows());
  const double step = tr.t[1] - tr.t[0];
  std::vector<double> margins;
  double worst_h = kInf, worst_l = kInf;
  for (std::size_t i = 2; i + 2 < tr.size(); ++i) {
    const double h1 = five_point_first(tr.h, i, step);
    const double h2 = five_point_second(tr.h, i, step);
    const double rhs_h = -h1 * h1 / (n - 1) - ricci_along(tr, i);
    const double mh = normalized(rhs_h, h2);

    // (e^{rate f} l')' <= -e^{rate f}(c l'^2 + Ric_f^N), divided by e^{rate f}.
    const double l1 = five_point_first(tr.l, i, step);
    const double l2 = five_point_second(tr.l, i, step);
    const double lhs_l = l2 + tr.rate * tr.df[i] * l1;
    const double rhs_l = -(tr.c * l1 * l1 + ricci_fN_along(tr, i));
    const double ml = normalized(rhs_l, lhs_l);
    margins.push_back(mh);
    margins.push_back(ml);
    worst_h = std::min(worst_h, mh);
    worst_l = std::min(worst_l, ml);
  }
  CheckReport r = make_report("riccati", std::move(margins), 1e-8);
  r.details["min_margin_h"] = worst_h;
  r.details["min_margin_l"] = worst_l;
  return r;
}

std::vector<double> jacobian_bound_margins(const JacobianTrajectory& tr, double kappa) {
  const double q = tr.c / (tr.c + 1.0);
  const double Dfull = tr.reparam_full();
  const double J1q = std::pow(tr.J.back(), q);
  std::vector<double> margins;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    const double t = tr.t[i];
    const double dt = tr.reparam[i];
    const TwistedCoefficient fwd = beta_from_distances(kappa, tr.c, t, dt, Dfull);
    const TwistedCoefficient bwd = beta_from_distances(kappa, tr.c, 1.0 - t, Dfull - dt, Dfull);
    const double rhs = (1.0 - t) * bwd.power(q) + t * fwd.power(q) * J1q;
    margins.push_back(std::isfinite(rhs) ? normalized(std::pow(tr.J[i], q), rhs) : -kInf);
  }
  return margins;
}

CheckReport check_jacobian_concavity(const JacobianTrajectory& tr, double kappa) {
  const double q = tr.c / (tr.c + 1.0);
  const double Dfull = tr.reparam_full();
  const bool beyond = beyond_diameter(kappa, Dfull);
  std::vector<double> margins;
  double worst[3] = {kInf, kInf, kInf};
  double recombination = 0.0;
  const std::vector<double> bound = jacobian_bound_margins(tr, kappa);
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    const double t = tr.t[i];
    const double m1 = normalized(tr.Dbar[i], (1.0 - t) * tr.Dbar.front() + t * tr.Dbar.back());
    double m2 = -kInf;
    if (!beyond) {
      const double dt = tr.reparam[i];
      const double sD = s_kappa(kappa, Dfull);
      const double sig0 = s_kappa(kappa, Dfull - dt) / sD;
      const double sig1 = s_kappa(kappa, dt) / sD;
      m2 = normalized(tr.D[i], sig0 * tr.D.front() + sig1 * tr.D.back());
      const TwistedCoefficient fwd = beta_from_distances(kappa, tr.c, t, dt, Dfull);
      const TwistedCoefficient bwd = beta_from_distances(kappa, tr.c, 1.0 - t, Dfull - dt, Dfull);
      const double a = (1.0 - t) * bwd.power(q) - std::pow(1.0 - t, q) * std::pow(sig0, 1.0 / (tr.c + 1.0));
      const double b = t * fwd.power(q) - std::pow(t, q) * std::pow(sig1, 1.0 / (tr.c + 1.0));
      recombination = std::max({recombination, std::abs(a), std::abs(b)});
    }
    const double m3 = bound[i - 1];
    margins.insert(margins.end(), {m1, m2, m3});
    worst[0] = std::min(worst[0], m1);
    worst[1] = std::min(worst[1], m2);
    worst[2] = std::min(worst[2], m3);
  }
  margins.push_back(-recombination);
  CheckReport r = make_report("jacobian_concavity", std::move(margins), 1e-8);
  r.details["min_margin_Dbar"] = worst[0];
  r.details["min_margin_D"] = worst[1];
  r.details["min_margin_J"] = worst[2];
  r.details["recombination_error"] = recombination;
  return r;
}

JacobianTrajectory sample_admissible_ray(const ModelSpace& space, const WeightFunction& weight,
                                         const DimensionParams& params, double kappa,
                                         std::mt19937_64& rng, const RaySampling& sampling) {
  const int n = space.dim();
  double hi = sampling.speed_hi;
  if (hi <= 0.0) hi = space.kind() == SpaceKind::kSphere ? 0.9 * M_PI * space.scale() : 2.0;
  if (space.kind() == SpaceKind::kSphere) hi = std::min(hi, M_PI * space.scale() - ModelSpace::kCutMargin);
  std::uniform_real_distribution<double> uspeed(sampling.speed_lo, hi);
  std::uniform_real_distribution<double> ulam(-0.8, 0.8);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < sampling.max_attempts; ++attempt) {
    TransportRay ray;
    ray.x = space.random_point(rng, sampling.region);
    const Tangent v = space.random_unit_tangent(ray.x, rng);
    const double speed = uspeed(rng);
    ray.w = speed * v;
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = ulam(rng) / speed;
    ray.S = Q * lam.asDiagonal() * Q.transpose();
    try {
      JacobianTrajectory tr = integrate_jacobi(space, weight, params, ray, sampling.steps);
      if (*std::min_element(tr.det.begin(), tr.det.end()) < sampling.det_floor) continue;
      if (beyond_diameter(kappa, tr.reparam_full())) continue;
      return tr;
    } catch (const SingularJacobian&) {
      continue;
    }
  }
  throw PreconditionError("no admissible ray found after " + std::to_string(sampling.max_attempts) +
                          " attempts");
}

JacobianSuiteResult run_jacobian_suite(const ModelSpace& space, const WeightFunction& weight,
                                       const DimensionParams& params, double kappa,
                                       const RaySampling& sampling) {
  std::vector<double> ric(sampling.count), conc(sampling.count);
  std::vector<double> ric_h(sampling.count), ric_l(sampling.count);
  std::vector<double> dbar(sampling.count), dcmp(sampling.count), jac(sampling.count);
  double recombination = 0.0;
  std::vector<double> recomb(sampling.count);
  parallel_for(sampling.count, [&](std::size_t i) {
    auto rng = sample_rng(sampling.seed, i);
    const JacobianTrajectory tr = sample_admissible_ray(space, weight, params, kappa, rng, sampling);
    const CheckReport a = check_riccati(tr);
    const CheckReport b = check_jacobian_concavity(tr, kappa);
    ric[i] = a.min_margin;
    conc[i] = b.min_margin;
    ric_h[i] = a.details["min_margin_h"];
    ric_l[i] = a.details["min_margin_l"];
    dbar[i] = b.details["min_margin_Dbar"];
    dcmp[i] = b.details["min_margin_D"];
    jac[i] = b.details["min_margin_J"];
    recomb[i] = b.details["recombination_error"];
  });
  for (double e : recomb) recombination = std::max(recombination, e);
  JacobianSuiteResult out;
  out.riccati = make_report("riccati", ric, 1e-8, sampling.seed);
  out.concavity = make_report("jacobian_concavity", conc, 1e-8, sampling.seed);
  auto minimum = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
  if (sampling.count > 0) {
    out.riccati.details["min_margin_h"] = minimum(ric_h);
    out.riccati.details["min_margin_l"] = minimum(ric_l);
    out.concavity.details["min_margin_Dbar"] = minimum(dbar);
    out.concavity.details["min_margin_D"] = minimum(dcmp);
    out.concavity.details["min_margin_J"] = minimum(jac);
    out.concavity.details["recombination_error"] = recombination;
    out.worst_ray = static_cast<std::size_t>(std::min_element(conc.begin(), conc.end()) - conc.begin());
  }
  return out;
}

CheckReport falsify_jacobian(const ModelSpace& space, const WeightFunction& weight,
                             const DimensionParams& params, double kappa,
                             const RaySampling& sampling) {
  CurvatureSampling cs;
  cs.count = std::min<std::size_t>(sampling.count, 2000);
  cs.seed = sampling.seed;
  cs.region = sampling.region;
  const CheckReport curvature = check_curvature_bound(space, weight, params, kappa, cs);
  if (curvature.passed()) {
    CheckReport r = vacuous_report("jacobian_falsification",
                                   "curvature bound holds on the sampled region; no violation expected");
    r.details["curvature_min_margin"] = curvature.min_margin;
    r.seed = sampling.seed;
    return r;
  }
  std::vector<double> margins(sampling.count);
  std::vector<std::size_t> where(sampling.count);
  parallel_for(sampling.count, [&](std::size_t i) {
    auto rng = sample_rng(sampling.seed, i);
    const JacobianTrajectory tr = sample_admissible_ray(space, weight, params, kappa, rng, sampling);
    const std::vector<double> m = jacobian_bound_margins(tr, kappa);
    const auto it = std::min_element(m.begin(), m.end());
    margins[i] = *it;
    where[i] = static_cast<std::size_t>(it - m.begin()) + 1;
  });
  CheckReport r = make_report("jacobian_falsification", margins, 1e-8, sampling.seed);
  r.details["curvature_min_margin"] = curvature.min_margin;
  if (!margins.empty()) {
    const std::size_t k = static_cast<std::size_t>(std::min_element(margins.begin(), margins.end()) - margins.begin());
    std::size_t first = margins.size();
    for (std::size_t i = 0; i < margins.size(); ++i) {
      if (margins[i] < -r.tolerance) {
        first = i;
        break;
      }
    }
    auto rng = sample_rng(sampling.seed, k);
    const JacobianTrajectory tr = sample_admissible_ray(space, weight, params, kappa, rng, sampling);
    nlohmann::json ce;
    ce["trial"] = k;
    ce["t"] = tr.t[where[k]];
    ce["margin"] = margins[k];
    ce["x"] = std::vector<double>(tr.ray.x.data(), tr.ray.x.data() + tr.ray.x.size());
    ce["w"] = std::vector<double>(tr.ray.w.data(), tr.ray.w.data() + tr.ray.w.size());
    r.details["counterexample"] = ce;
    r.details["first_violation_trial"] = first < margins.size() ? nlohmann::json(first) : nlohmann::json(nullptr);
  }
  return r;
}

void write_trajectory_csv(std::ostream& os, const JacobianTrajectory& tr) {
  os << "t,det,J,h,l,D,Dbar\n";
  os.precision(17);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << tr.t[i] << ',' << tr.det[i] << ',' << tr.J[i] << ',' << tr.h[i] << ',' << tr.l[i] << ','
       << tr.D[i] << ',' << tr.Dbar[i] << '\n';
  }
}

}  // namespace cdcheck
