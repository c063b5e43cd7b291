#include "cdcheck/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/curvature.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"
#include "cdcheck/reparam.hpp"

namespace cdcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BetaPair {
  TwistedCoefficient forward;   // beta_t(x, y)
  TwistedCoefficient backward;  // beta_{1-t}(y, x)
};

BetaPair betas_on_segment(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                          double kappa, const GeodesicSegment& seg, double t) {
  if (seg.degenerate) return {};
  const double D = reparam_along(space, weight, params, seg, 1.0).value;
  const double dt = reparam_along(space, weight, params, seg, t).value;
  return {beta_from_distances(kappa, params.c, t, dt, D), beta_from_distances(kappa, params.c, 1.0 - t, D - dt, D)};
}

// U(r / beta) beta / r, with the beta -> inf limit U'(0+) taken as -inf.
double weighted_term(const EntropyFunctional& U, double r, const TwistedCoefficient& b) {
  if (b.regime == CoefficientRegime::kInfinite) return -kInf;
  const double s = r / b.value;
  return U.U(s) / s;
}

bool depends_on_first_axis_only(const WeightFunction& w) {
  const std::string& p = w.preset();
  return p == "zero" || p == "constant" || p == "linear" || p == "cosine";
}

double renyi_tau(double kappa, double N, double t, double theta) {
  if (theta == 0.0) return t;
  const double C = diam_kappa(kappa);
  if (std::isfinite(C) && theta >= C) return kInf;
  const double sigma = s_kappa(kappa, t * theta) / s_kappa(kappa, theta);
  return std::pow(t, 1.0 / N) * std::pow(sigma, 1.0 - 1.0 / N);
}

CheckReport twcd_report(std::string name, const std::vector<double>& ts, const std::vector<double>& lhs,
                        const std::vector<double>& rhs, double tolerance) {
  std::vector<double> margins(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) margins[k] = rhs[k] - lhs[k];
  CheckReport rep = make_report(std::move(name), std::move(margins), tolerance);
  rep.details["t"] = ts;
  rep.details["lhs"] = lhs;
  rep.details["rhs"] = rhs;
  return rep;
}

}  // namespace

std::vector<double> default_t_grid() {
  std::vector<double> ts;
  for (int k = 1; k <= 9; ++k) ts.push_back(0.1 * k);
  return ts;
}

CheckReport check_twcd(const DensityField& rho0, const DensityField& rho1, const DimensionParams& params,
                       double kappa, const EntropyFunctional& U, const std::vector<double>& t_grid,
                       double tolerance) {
  const AxisMeasure& meas = rho0.measure();
  if (!U.renyi && !moment_condition_holds(meas, params)) {
    throw IntegrabilityError("functional '" + U.id + "' is not integrable against this reference measure");
  }
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("t grid values must lie in ]0,1[");
  }
  const MonotoneTransport map(rho0, rho1);
  const auto& T = map.map_table();
  const auto& dT = map.slope_table();
  const std::size_t m = rho0.size(), nt = t_grid.size();
  std::vector<std::vector<double>> integrand(nt, std::vector<double>(m, 0.0));

  parallel_for(m, [&](std::size_t i) {
    const double s = rho0.node(i);
    const double w = meas.density(s);
    const double r0 = rho0[i];
    if (w == 0.0 || r0 == 0.0) return;
    const double wT = meas.density(T[i]);
    const double r1 = wT > 0.0 ? r0 * w / (wT * dT[i]) : rho1.value(T[i]);
    for (const TransverseNode& node : meas.nodes()) {
      const GeodesicSegment seg = meas.segment(s, T[i], node);
      for (std::size_t k = 0; k < nt; ++k) {
        const double t = t_grid[k];
        const BetaPair b = betas_on_segment(meas.space(), meas.weight(), params, kappa, seg, t);
        const double term = (1.0 - t) * weighted_term(U, r0, b.backward) + t * weighted_term(U, r1, b.forward);
        integrand[k][i] += node.weight * term * r0 * w;
      }
    }
  });

  std::vector<double> lhs(nt), rhs(nt), direct(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    lhs[k] = interpolated_entropy(map, t_grid[k], U);
    rhs[k] = simpson(integrand[k], rho0.step());
    const DensityField rt = map.interpolate(t_grid[k]);
    std::vector<double> v(rt.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = U.U(rt[j]) * meas.density(rt.node(j));
    direct[k] = simpson(v, rt.step());
  }
  CheckReport rep = twcd_report("twcd", t_grid, lhs, rhs, tolerance);
  rep.details["lhs_direct"] = direct;
  rep.details["functional"] = U.id;
  rep.details["kappa"] = kappa;
  rep.details["w2"] = map.w2();
  return rep;
}

CheckReport check_classical_renyi(const DensityField& rho0, const DensityField& rho1, double N, double kappa,
                                  const std::vector<double>& t_grid, double tolerance) {
  const AxisMeasure& meas = rho0.measure();
  if (meas.kind() != AxisKind::kSlab || meas.weight().preset() != "zero") {
    throw ConfigError("the classical Renyi check needs a flat slab with f = 0");
  }
  if (!(N > 1.0)) throw ConfigError("the classical Renyi check needs N > 1");
  const MonotoneTransport map(rho0, rho1);
  const auto& T = map.map_table();
  const auto& dT = map.slope_table();
  const std::size_t m = rho0.size(), nt = t_grid.size();
  std::vector<double> lhs(nt), rhs(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = t_grid[k];
    std::vector<double> a(m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double r0 = rho0[i];
      if (r0 == 0.0) continue;
      const double w = meas.density(rho0.node(i));
      const double J = (1.0 - t) + t * dT[i];
      a[i] = std::pow(r0, 1.0 - 1.0 / N) * std::pow(J, 1.0 / N) * w;
      const double theta = std::abs(T[i] - rho0.node(i));
      const double r1 = r0 / dT[i];
      b[i] = (renyi_tau(kappa, N, 1.0 - t, theta) * std::pow(r0, -1.0 / N) +
              renyi_tau(kappa, N, t, theta) * std::pow(r1, -1.0 / N)) *
             r0 * w;
    }
    lhs[k] = N - N * simpson(a, rho0.step());
    rhs[k] = N - N * simpson(b, rho0.step());
  }
  CheckReport rep = twcd_report("classical_renyi", t_grid, lhs, rhs, tolerance);
  rep.details["N"] = N;
  rep.details["kappa"] = kappa;
  return rep;
}

void write_twcd_csv(std::ostream& os, const CheckReport& report) {
  os << "t,lhs,rhs,margin\n";
  os.precision(17);
  const auto& ts = report.details.at("t");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    os << ts[k].get<double>() << ',' << report.details["lhs"][k].get<double>() << ','
       << report.details["rhs"][k].get<double>() << ',' << report.margins[k] << '\n';
  }
}

BmSet BmSet::ball(Point center, double radius) {
  BmSet s;
  s.shape = SetShape::kBall;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

BmSet BmSet::interval(double lo, double hi) {
  BmSet s;
  s.shape = SetShape::kInterval;
  s.lo = lo;
  s.hi = hi;
  return s;
}

CheckReport check_brunn_minkowski(const RegionPair& sets, const ModelSpace& space, const WeightFunction& weight,
                                  const DimensionParams& params, double kappa, const BmOptions& options) {
  const double t = sets.t;
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("Brunn-Minkowski needs t in ]0,1[");
  if (sets.X.shape != sets.Y.shape) throw RegionError("X and Y must have the same shape");
  if (space.kind() != SpaceKind::kEuclidean) throw RegionError("Brunn-Minkowski regions need Euclidean space");
  const int n = space.dim();
  const double q = params.c_ratio();
  double mX, mY, mZ;
  // Infima of beta_{1-t}(y, x) and beta_t(x, y) at two resolutions.
  double inf_back[2] = {kInf, kInf}, inf_fwd[2] = {kInf, kInf};

  if (sets.X.shape == SetShape::kBall) {
    if (!weight.is_constant()) throw RegionError("ball regions need a constant weight");
    const BmSet& X = sets.X;
    const BmSet& Y = sets.Y;
    if (X.center.size() != n || Y.center.size() != n || !(X.radius > 0.0) || !(Y.radius > 0.0)) {
      throw RegionError("balls need a center in R^n and a positive radius");
    }
    const double f0 = weight.value(space, Point::Zero(n));
    const double log_unit = 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0) - f0;
    auto vol = [&](double r) { return std::exp(log_unit + n * std::log(r)); };
    mX = vol(X.radius);
    mY = vol(Y.radius);
    mZ = vol((1.0 - t) * X.radius + t * Y.radius);
    const double L = (Y.center - X.center).norm();
    const double dmin = std::max(0.0, L - X.radius - Y.radius), dmax = L + X.radius + Y.radius;
    const double scale = std::exp(-params.reparam_rate() * f0);
    for (int level = 0; level < 2; ++level) {
      const int g = (level == 0 ? options.grid / 2 : options.grid) + 1;
      for (int k = 0; k < g; ++k) {
        const double D = scale * (dmin + (dmax - dmin) * k / (g - 1));
        inf_fwd[level] = std::min(inf_fwd[level], beta_from_distances(kappa, params.c, t, t * D, D).value);
        inf_back[level] =
            std::min(inf_back[level], beta_from_distances(kappa, params.c, 1.0 - t, (1.0 - t) * D, D).value);
      }
    }
  } else {
    if (!depends_on_first_axis_only(weight)) {
      throw RegionError("interval regions need a weight depending on x_1 only");
    }
    const BmSet& X = sets.X;
    const BmSet& Y = sets.Y;
    if (!(X.lo < X.hi) || !(Y.lo < Y.hi)) throw RegionError("intervals need lo < hi");
    const auto meas = AxisMeasure::make(space, weight);
    auto mass = [&](double lo, double hi) {
      return adaptive_simpson([&](double s) { return meas->density(s); }, lo, hi, 1e-13).value;
    };
    mX = mass(X.lo, X.hi);
    mY = mass(Y.lo, Y.hi);
    mZ = mass((1.0 - t) * X.lo + t * Y.lo, (1.0 - t) * X.hi + t * Y.hi);
    const double rho_max = std::sqrt(static_cast<double>(n - 1));
    for (int level = 0; level < 2; ++level) {
      const int g = (level == 0 ? options.grid / 2 : options.grid) + 1;
      const int tg = (level == 0 ? options.transverse_grid / 2 : options.transverse_grid) + 1;
      const std::size_t total = static_cast<std::size_t>(g) * g * tg;
      std::vector<double> fwd(total), back(total);
      parallel_for(total, [&](std::size_t idx) {
        const int a = static_cast<int>(idx / (static_cast<std::size_t>(g) * tg));
        const int b = static_cast<int>((idx / tg) % g);
        const int r = static_cast<int>(idx % tg);
        Point x = Point::Zero(n), y = Point::Zero(n);
        x(0) = X.lo + (X.hi - X.lo) * a / (g - 1);
        y(0) = Y.lo + (Y.hi - Y.lo) * b / (g - 1);
        y(1) = rho_max * r / (tg - 1);
        const BetaPair bp = betas_on_segment(space, weight, params, kappa, space.log_map(x, y), t);
        fwd[idx] = bp.forward.value;
        back[idx] = bp.backward.value;
      });
      inf_fwd[level] = *std::min_element(fwd.begin(), fwd.end());
      inf_back[level] = *std::min_element(back.begin(), back.end());
    }
  }

  auto pw = [&](double v) { return std::isfinite(v) ? std::pow(v, q) : kInf; };
  const double lhs = std::pow(mZ, q);
  const double rhs = (1.0 - t) * pw(inf_back[1]) * std::pow(mX, q) + t * pw(inf_fwd[1]) * std::pow(mY, q);
  const double tol = options.tolerance >= 0.0
                         ? options.tolerance
                         : (sets.X.shape == SetShape::kBall ? 1e-10 : 1e-6);
  CheckReport rep = make_report("brunn_minkowski", {lhs - rhs}, tol);
  rep.details["shape"] = sets.X.shape == SetShape::kBall ? "ball" : "interval";
  rep.details["t"] = t;
  rep.details["m_X"] = mX;
  rep.details["m_Y"] = mY;
  rep.details["m_Z"] = mZ;
  rep.details["lhs"] = lhs;
  rep.details["rhs"] = rhs;
  rep.details["inf_beta_t"] = inf_fwd[1];
  rep.details["inf_beta_1mt"] = inf_back[1];
  rep.details["refinement_gap"] = std::max(std::abs(inf_fwd[1] - inf_fwd[0]), std::abs(inf_back[1] - inf_back[0]));
  return rep;
}

double p_mean(double a, double b, double t, double p) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  if (p == -kInf) return std::min(a, b);
  if (p == kInf) return std::max(a, b);
  if (p == 0.0) return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
  return std::pow((1.0 - t) * std::pow(a, p) + t * std::pow(b, p), 1.0 / p);
}

double interpolation_exponent(double p, double c) {
  if (p == kInf) return c / (1.0 + c);
  const double den = (1.0 + c) * p + c;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(p))) return -kInf;
  return c * p / den;
}

CheckReport check_interpolation(const DensityField& psi0, const DensityField& psi1, const DensityField* psi,
                                double t, double p, const DimensionParams& params, double kappa,
                                const InterpolationOptions& options) {
  const AxisMeasure& meas = psi0.measure();
  if (meas.kind() != AxisKind::kSlab || !depends_on_first_axis_only(meas.weight())) {
    throw ConfigError("interpolation checks need a flat slab whose weight depends on x_1 only");
  }
  if (psi1.measure_ptr() != psi0.measure_ptr() || (psi && psi->measure_ptr() != psi0.measure_ptr())) {
    throw ConfigError("psi0, psi1 and psi must share one reference measure");
  }
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("interpolation needs t in ]0,1[");
  const double pmin = -params.c_ratio();
  if (p < pmin - 1e-14) {
    throw PreconditionError("p = " + std::to_string(p) + " is below -c/(c+1) = " + std::to_string(pmin));
  }
  if (std::abs(p - pmin) <= 1e-14) p = pmin;
  const double p_prime = interpolation_exponent(p, params.c);
  const ModelSpace& space = meas.space();
  const WeightFunction& weight = meas.weight();
  const int n = space.dim();

  auto mean_at = [&](const Point& x, const Point& y) {
    const BetaPair b = betas_on_segment(space, weight, params, kappa, space.log_map(x, y), t);
    const double a0 = b.backward.regime == CoefficientRegime::kInfinite ? 0.0 : psi0.value(x(0)) / b.backward.value;
    const double a1 = b.forward.regime == CoefficientRegime::kInfinite ? 0.0 : psi1.value(y(0)) / b.forward.value;
    return p_mean(a0, a1, t, p);
  };

  const double zlo = (1.0 - t) * psi0.lo() + t * psi1.lo();
  const double zhi = (1.0 - t) * psi0.hi() + t * psi1.hi();
  std::function<double(double)> psi_fn;
  double lhs;
  std::vector<double> envelope;
  if (psi) {
    psi_fn = [psi](double z) { return psi->value(z); };
    lhs = psi->mass();
  } else {
    const std::size_t mz = (std::size_t{1} << options.log2_cells) + 1;
    const std::size_t mx = mz;
    const double hz = (zhi - zlo) / static_cast<double>(mz - 1);
    const double rho_max = std::sqrt(static_cast<double>(n - 1));
    std::vector<double> sup(mz, 0.0);
    parallel_for(mz, [&](std::size_t j) {
      const double z = zlo + hz * static_cast<double>(j);
      const double xa = std::max(psi0.lo(), (z - t * psi1.hi()) / (1.0 - t));
      const double xb = std::min(psi0.hi(), (z - t * psi1.lo()) / (1.0 - t));
      if (xa > xb) return;
      double best = 0.0;
      for (std::size_t k = 0; k < mx; ++k) {
        Point x = Point::Zero(n), y = Point::Zero(n);
        x(0) = xa + (xb - xa) * static_cast<double>(k) / static_cast<double>(mx - 1);
        y(0) = std::clamp((z - (1.0 - t) * x(0)) / t, psi1.lo(), psi1.hi());
        for (int r = 0; r <= options.transverse_grid; ++r) {
          y(1) = rho_max * r / options.transverse_grid;
          best = std::max(best, mean_at(x, y));
        }
      }
      sup[j] = best;
    });
    // Cell value: inflated max over the cell's nodes and their neighbours.
    envelope.assign(mz - 1, 0.0);
    for (std::size_t j = 0; j + 1 < mz; ++j) {
      double v = 0.0;
      for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(j) - 1; k <= static_cast<std::ptrdiff_t>(j) + 2; ++k) {
        if (k >= 0 && k < static_cast<std::ptrdiff_t>(mz)) v = std::max(v, sup[k]);
      }
      envelope[j] = v * (1.0 + options.inflation);
    }
    psi_fn = [&envelope, zlo, zhi, hz](double z) {
      if (z < zlo || z > zhi) return 0.0;
      const std::size_t j = std::min(static_cast<std::size_t>((z - zlo) / hz), envelope.size() - 1);
      return envelope[j];
    };
    lhs = 0.0;
    using GL = boost::math::quadrature::gauss<double, 10>;
    for (std::size_t j = 0; j < envelope.size(); ++j) {
      const double a = zlo + hz * static_cast<double>(j);
      lhs += envelope[j] * GL::integrate([&](double s) { return meas.density(s); }, a, a + hz);
    }
  }

  // Pointwise hypothesis on random triples.
  std::vector<double> hyp(options.hypothesis_samples);
  parallel_for(hyp.size(), [&](std::size_t k) {
    auto rng = sample_rng(options.seed, k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point x(n), y(n);
    x(0) = psi0.lo() + (psi0.hi() - psi0.lo()) * u(rng);
    y(0) = psi1.lo() + (psi1.hi() - psi1.lo()) * u(rng);
    for (int d = 1; d < n; ++d) {
      x(d) = u(rng);
      y(d) = u(rng);
    }
    const double M = mean_at(x, y);
    const double z1 = (1.0 - t) * x(0) + t * y(0);
    hyp[k] = (psi_fn(z1) - M) / (1.0 + M);
  });
  const auto worst = std::min_element(hyp.begin(), hyp.end());
  if (worst != hyp.end() && *worst < -options.tolerance) {
    throw HypothesisError("pointwise hypothesis fails at sample " + std::to_string(worst - hyp.begin()) +
                          " (margin " + std::to_string(*worst) + ")");
  }

  const double rhs = p_mean(psi0.mass(), psi1.mass(), t, p_prime);
  CheckReport rep = make_report("interpolation", {lhs - rhs}, options.tolerance, options.seed);
  rep.details["t"] = t;
  rep.details["p"] = p;
  rep.details["p_prime"] = std::isfinite(p_prime) ? nlohmann::json(p_prime) : nlohmann::json("-inf");
  rep.details["lhs"] = lhs;
  rep.details["rhs"] = rhs;
  rep.details["hypothesis_min_margin"] = hyp.empty() ? 0.0 : *worst;
  rep.details["constructed_psi"] = psi == nullptr;
  return rep;
}

namespace {

// delta is null when the inequality does not involve it.
void check_functional_preconditions(const DensityField& rho, const DimensionParams& params, double kappa,
                                    const double* delta) {
  const AxisMeasure& meas = rho.measure();
  if (!(kappa > 0.0)) throw PreconditionError("kappa > 0 required, got " + std::to_string(kappa));
  if (!std::isfinite(meas.axis_hi()) || !std::isfinite(meas.axis_lo())) {
    throw PreconditionError("reference measure must be a probability measure (slab measures have infinite mass)");
  }
  const double total =
      adaptive_simpson([&](double s) { return meas.density(s); }, meas.axis_lo(), meas.axis_hi(), 1e-13).value;
  if (std::abs(total - 1.0) > 1e-8) {
    throw PreconditionError("reference measure has mass " + std::to_string(total) + ", not 1");
  }
  if (rho.lo() > meas.axis_lo() + 1e-12 || rho.hi() < meas.axis_hi() - 1e-12) {
    throw ConfigError("functional checks need rho sampled on the whole axis");
  }
  if (delta) {
    double lhs = -kInf;
    for (double s : linspace(meas.axis_lo(), meas.axis_hi(), 1025)) {
      lhs = std::max(lhs, (1.0 - params.eps) * meas.weight().value(meas.space(), meas.point(s, meas.nodes().front())));
    }
    if (lhs > (params.n - 1) * *delta + 1e-12) {
      throw PreconditionError("(1-eps) f <= (n-1) delta fails: sup (1-eps) f = " + std::to_string(lhs) +
                              ", (n-1) delta = " + std::to_string((params.n - 1) * *delta));
    }
  }
  CurvatureSampling cs;
  cs.count = 500;
  const CheckReport curv = check_curvature_bound(meas.space(), meas.weight(), params, kappa, cs);
  if (!curv.passed()) {
    throw PreconditionError("curvature bound fails (min margin " + std::to_string(curv.min_margin) + ")");
  }
}

void annotate_m_constant(CheckReport& rep, const AxisMeasure& meas) {
  rep.details["m_constant"] = meas.weight().is_constant() ? "holds" : "hypothesis unverifiable";
  if (!meas.weight().is_constant()) rep.note = "m-constant hypothesis unverifiable for non-constant f";
}

}  // namespace

CheckReport check_hwi_lsi(const DensityField& rho, const DimensionParams& params, double kappa, double delta,
                          double tolerance) {
  check_functional_preconditions(rho, params, kappa, &delta);
  const AxisMeasure& meas = rho.measure();
  const double H = entropy_functional(rho, params, EntropyFunctional::renyi_entropy(params)).value;
  const double I = fisher_information(rho, params);
  const DensityField ref = DensityField::uniform(rho.measure_ptr(), static_cast<int>(std::log2(rho.size() - 1)));
  const MonotoneTransport map(rho, ref);
  const double W2 = map.w2();
  const double sup = rho.sup();
  const double q = params.c_ratio();
  const double k = kappa * std::exp(-4.0 * delta);
  const double factor = 1.0 + 2.0 * std::pow(sup, -q);
  const double hwi_rhs = std::sqrt(I) * W2 - k / (6.0 * params.c) * factor * W2 * W2;
  const double lsi_rhs = 3.0 * params.c * I / (2.0 * k * factor);
  CheckReport rep = make_report("hwi_lsi", {hwi_rhs - H, lsi_rhs - H}, tolerance);
  rep.details["H"] = H;
  rep.details["I"] = I;
  rep.details["W2"] = W2;
  rep.details["sup_rho"] = sup;
  rep.details["hwi_margin"] = hwi_rhs - H;
  rep.details["lsi_margin"] = lsi_rhs - H;
  rep.details["delta"] = delta;
  annotate_m_constant(rep, meas);
  return rep;
}

CheckReport check_transport_energy(const DensityField& rho, const DimensionParams& params, double kappa,
                                   double tolerance) {
  check_functional_preconditions(rho, params, kappa, nullptr);
  const AxisMeasure& meas = rho.measure();
  const double H = entropy_functional(rho, params, EntropyFunctional::renyi_entropy(params)).value;
  const DensityField ref = DensityField::uniform(rho.measure_ptr(), static_cast<int>(std::log2(rho.size() - 1)));
  const MonotoneTransport map(rho, ref);
  const auto& T = map.map_table();
  const double c = params.c, q = params.c_ratio();
  const std::size_t m = rho.size();
  std::vector<double> ent(m, 0.0), coup(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const double s = rho.node(i);
    const double w = meas.density(s);
    const double r = rho[i];
    if (w == 0.0 || r == 0.0) return;
    ent[i] = std::pow(r, 1.0 / (c + 1.0)) * std::log(r) * w;
    const Point x = meas.point(s, meas.nodes().front());
    const Point y = meas.point(T[i], meas.nodes().front());
    const double b = b_coeff(meas.space(), meas.weight(), params, kappa, x, y);
    const double fb = frak_b(meas.space(), meas.weight(), params, kappa, x, y);
    coup[i] = (fb + std::exp(1.0 - std::pow(b, q))) * r * w;
  });
  const double p = (c + 1.0) / c;
  const double rhs = 0.5 * p + 0.5 * simpson(ent, rho.step()) - 0.5 * p * simpson(coup, rho.step());
  CheckReport rep = make_report("transport_energy", {H - rhs}, tolerance);
  rep.details["H"] = H;
  rep.details["rhs"] = rhs;
  rep.details["W2"] = map.w2();
  annotate_m_constant(rep, meas);
  return rep;
}

CheckReport check_young_inequality(int grid) {
  std::vector<double> margins;
  for (int i = 0; i < grid; ++i) {
    const double a = std::pow(10.0, -6.0 + 9.0 * i / (grid - 1));
    for (int j = 0; j < grid; ++j) {
      const double b = -10.0 + 15.0 * j / (grid - 1);
      const double rhs = a * std::log(a) - 2.0 * a + std::exp(b + 1.0);
      margins.push_back((rhs - a * b) / (1.0 + std::abs(a * b) + std::exp(b + 1.0)));
    }
  }
  // Equality along a = e^{b+1}.
  for (int j = 0; j < grid; ++j) {
    const double b = -10.0 + 15.0 * j / (grid - 1);
    const double a = std::exp(b + 1.0);
    margins.push_back((a * std::log(a) - 2.0 * a + a - a * b) / (1.0 + std::abs(a * b) + a));
  }
  return make_report("young", std::move(margins), 1e-12);
}

}  // namespace cdcheck
