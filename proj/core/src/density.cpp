#include "cdcheck/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "cdcheck/errors.hpp"

namespace cdcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTransverseOrder = 10;

bool is_power_of_two_plus_one(std::size_t m) {
  if (m < 5) return false;
  const std::size_t k = m - 1;
  return (k & (k - 1)) == 0;
}

// Power-basis coefficients of the cubic through (0,g0),(1,g1),(2,g2),(3,g3).
std::array<double, 4> cubic_coefficients(double g0, double g1, double g2, double g3) {
  return {g0, (-11.0 * g0 + 18.0 * g1 - 9.0 * g2 + 2.0 * g3) / 6.0,
          (2.0 * g0 - 5.0 * g1 + 4.0 * g2 - g3) / 2.0, (-g0 + 3.0 * g1 - 3.0 * g2 + g3) / 6.0};
}

double cubic_eval(const std::array<double, 4>& a, double u) {
  return a[0] + u * (a[1] + u * (a[2] + u * a[3]));
}

double cubic_antiderivative(const std::array<double, 4>& a, double u) {
  return u * (a[0] + u * (a[1] / 2.0 + u * (a[2] / 3.0 + u * a[3] / 4.0)));
}

// Cubic through the four grid values around cell i; returns coefficients and
// the offset of the cell's left node inside the stencil.
struct CellCubic {
  std::array<double, 4> a;
  double offset;
};

CellCubic cell_cubic(const std::vector<double>& g, std::size_t i) {
  const std::size_t m = g.size();
  const std::size_t j0 = std::min<std::size_t>(i == 0 ? 0 : i - 1, m - 4);
  return {cubic_coefficients(g[j0], g[j0 + 1], g[j0 + 2], g[j0 + 3]), static_cast<double>(i - j0)};
}

double interpolate_grid(const std::vector<double>& g, double lo, double h, double s) {
  const std::size_t m = g.size();
  const double pos = (s - lo) / h;
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(m - 2)));
  const CellCubic cc = cell_cubic(g, i);
  return cubic_eval(cc.a, cc.offset + (pos - static_cast<double>(i)));
}

double log_unit_sphere_area(int dim) {
  // |S^{dim}| = 2 pi^{(dim+1)/2} / Gamma((dim+1)/2)
  const double k = 0.5 * (dim + 1);
  return std::log(2.0) + k * std::log(M_PI) - std::lgamma(k);
}

std::vector<double> mass_values(const DensityField& f) {
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * f.measure().density(f.node(i));
  return g;
}

std::vector<double> cumulative(const std::vector<double>& g, double h) {
  std::vector<double> C(g.size(), 0.0);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const CellCubic cc = cell_cubic(g, i);
    C[i + 1] = C[i] + h * (cubic_antiderivative(cc.a, cc.offset + 1.0) - cubic_antiderivative(cc.a, cc.offset));
  }
  return C;
}

}  // namespace

const char* to_string(AxisKind kind) { return kind == AxisKind::kSlab ? "slab" : "zonal"; }

std::shared_ptr<const AxisMeasure> AxisMeasure::make(const ModelSpace& space, const WeightFunction& weight) {
  if (weight.preset() == "custom") {
    throw ConfigError("quasi-1D constructions need a preset weight, got " + weight.name());
  }
  if (space.kind() == SpaceKind::kHyperbolic) {
    throw ConfigError("quasi-1D constructions need a Euclidean slab or a zonal sphere");
  }
  const int n = space.dim();
  if (n < 2) throw DimensionError("quasi-1D constructions need dimension >= 2");
  if (space.kind() == SpaceKind::kSphere) {
    auto m = std::shared_ptr<AxisMeasure>(new AxisMeasure(AxisKind::kZonal, space, weight));
    m->log_sphere_area_ = log_unit_sphere_area(n - 1);
    m->nodes_.push_back({Eigen::VectorXd(), 1.0});
    return m;
  }
  auto m = std::shared_ptr<AxisMeasure>(new AxisMeasure(AxisKind::kSlab, space, weight));
  const bool separable_tail = weight.preset() == "quadratic" && weight.parameter() != 0.0;
  if (!separable_tail) {
    m->nodes_.push_back({Eigen::VectorXd::Constant(n - 1, 0.5), 1.0});
    return m;
  }
  // f_perp(x_perp) = f(0, x_perp) - f(0); tensor Gauss-Legendre on the cube.
  using GL = boost::math::quadrature::gauss<double, kTransverseOrder>;
  std::vector<double> u, wu;
  for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
    const double xk = GL::abscissa()[k], wk = GL::weights()[k];
    if (xk == 0.0) {
      u.push_back(0.5);
      wu.push_back(0.5 * wk);
    } else {
      u.push_back(0.5 + 0.5 * xk);
      wu.push_back(0.5 * wk);
      u.push_back(0.5 - 0.5 * xk);
      wu.push_back(0.5 * wk);
    }
  }
  const int dims = n - 1;
  std::vector<int> idx(dims, 0);
  const Point origin = Point::Zero(n);
  const double f00 = weight.value(space, origin);
  double total = 0.0;
  while (true) {
    TransverseNode node;
    node.offset.resize(dims);
    double w = 1.0;
    for (int d = 0; d < dims; ++d) {
      node.offset(d) = u[idx[d]];
      w *= wu[idx[d]];
    }
    Point p = origin;
    p.tail(dims) = node.offset;
    node.weight = w * std::exp(-(weight.value(space, p) - f00));
    total += node.weight;
    m->nodes_.push_back(node);
    int d = 0;
    while (d < dims && ++idx[d] == static_cast<int>(u.size())) idx[d++] = 0;
    if (d == dims) break;
  }
  for (auto& node : m->nodes_) node.weight /= total;
  m->transverse_mass_ = total;
  return m;
}

double AxisMeasure::axis_lo() const { return kind_ == AxisKind::kSlab ? -kInf : 0.0; }
double AxisMeasure::axis_hi() const { return kind_ == AxisKind::kSlab ? kInf : M_PI * space_.scale(); }

Point AxisMeasure::point(double s, const TransverseNode& node) const {
  const int n = space_.dim();
  if (kind_ == AxisKind::kSlab) {
    Point p(n);
    p(0) = s;
    p.tail(n - 1) = node.offset;
    return p;
  }
  const double theta = s / space_.scale();
  Point u = Point::Zero(n + 1);
  u(0) = std::sin(theta);
  u(n) = std::cos(theta);
  return u;
}

GeodesicSegment AxisMeasure::segment(double s, double s2, const TransverseNode& node) const {
  GeodesicSegment seg;
  seg.start = point(s, node);
  seg.end = point(s2, node);
  seg.length = std::abs(s2 - s);
  seg.degenerate = seg.length == 0.0;
  const double sign = s2 >= s ? 1.0 : -1.0;
  const int n = space_.dim();
  if (kind_ == AxisKind::kSlab) {
    seg.direction = Tangent::Unit(n, 0) * sign;
  } else {
    const double theta = s / space_.scale();
    Tangent v = Tangent::Zero(n + 1);
    v(0) = std::cos(theta);
    v(n) = -std::sin(theta);
    seg.direction = sign * v;
  }
  return seg;
}

double AxisMeasure::density(double s) const {
  if (kind_ == AxisKind::kSlab) {
    Point p = Point::Zero(space_.dim());
    p(0) = s;
    return std::exp(-weight_.value(space_, p)) * transverse_mass_;
  }
  const double R = space_.scale();
  const double sn = std::sin(s / R);
  if (sn <= 0.0) return 0.0;
  const int n = space_.dim();
  return std::exp(-weight_.value(space_, point(s, nodes_.front())) + log_sphere_area_ +
                  (n - 1) * std::log(R * sn));
}

double simpson(const std::vector<double>& v, double step) {
  if (v.size() < 3 || v.size() % 2 == 0) throw ConfigError("Simpson rule needs an odd number >= 3 of samples");
  double acc = v.front() + v.back();
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += (i % 2 ? 4.0 : 2.0) * v[i];
  return acc * step / 3.0;
}

DensityField::DensityField(std::shared_ptr<const AxisMeasure> measure, double lo, double hi,
                           std::vector<double> rho)
    : measure_(std::move(measure)), lo_(lo), hi_(hi), rho_(std::move(rho)) {
  if (!measure_) throw ConfigError("density field without axis measure");
  if (!(lo_ < hi_)) throw ConfigError("density grid needs lo < hi");
  if (lo_ < measure_->axis_lo() - 1e-12 || hi_ > measure_->axis_hi() + 1e-12) {
    throw ConfigError("density grid leaves the axis range");
  }
  if (!is_power_of_two_plus_one(rho_.size())) {
    throw ConfigError("density grid must have 2^k + 1 >= 5 points, got " + std::to_string(rho_.size()));
  }
  for (double r : rho_) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("density values must be finite and nonnegative");
  }
}

DensityField DensityField::from_function(std::shared_ptr<const AxisMeasure> measure, double lo, double hi,
                                         const std::function<double(double)>& fn, int log2_cells) {
  const std::size_t m = (std::size_t{1} << log2_cells) + 1;
  std::vector<double> rho(m);
  const double h = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) rho[i] = fn(lo + h * static_cast<double>(i));
  return DensityField(std::move(measure), lo, hi, std::move(rho)).normalized();
}

DensityField DensityField::uniform(std::shared_ptr<const AxisMeasure> measure, int log2_cells) {
  if (!std::isfinite(measure->axis_lo()) || !std::isfinite(measure->axis_hi())) {
    throw ConfigError("the reference measure has no uniform density on an unbounded axis");
  }
  const double lo = measure->axis_lo(), hi = measure->axis_hi();
  return from_function(std::move(measure), lo, hi, [](double) { return 1.0; }, log2_cells);
}

double DensityField::mass() const { return simpson(mass_values(*this), step()); }

double DensityField::sup() const { return *std::max_element(rho_.begin(), rho_.end()); }

DensityField DensityField::normalized() const {
  const double m = mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("density has no finite positive mass");
  std::vector<double> r = rho_;
  for (double& v : r) v /= m;
  return DensityField(measure_, lo_, hi_, std::move(r));
}

double DensityField::mass_density(double s) const {
  if (s < lo_ || s > hi_) return 0.0;
  return interpolate_grid(mass_values(*this), lo_, step(), s);
}

double DensityField::value(double s) const {
  if (s < lo_ || s > hi_) return 0.0;
  return interpolate_grid(rho_, lo_, step(), s);
}

void DensityField::write_csv(std::ostream& os) const {
  os << "x,rho\n";
  os.precision(17);
  for (std::size_t i = 0; i < rho_.size(); ++i) os << node(i) << ',' << rho_[i] << '\n';
}

DensityField DensityField::read_csv(std::istream& is, std::shared_ptr<const AxisMeasure> measure) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty density CSV");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "x,rho") throw ConfigError("density CSV header must be 'x,rho'");
  std::vector<double> xs, rho;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double x, r;
    char comma;
    if (!(ls >> x >> comma >> r) || comma != ',') throw ConfigError("bad density CSV row: " + line);
    xs.push_back(x);
    rho.push_back(r);
  }
  if (xs.size() < 2) throw ConfigError("density CSV needs at least two rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - (xs.front() + h * static_cast<double>(i))) > 1e-9 * (1.0 + std::abs(xs[i]))) {
      throw ConfigError("density CSV grid must be uniform");
    }
  }
  return DensityField(std::move(measure), xs.front(), xs.back(), std::move(rho));
}

MonotoneTransport::MonotoneTransport(const DensityField& rho0, const DensityField& rho1)
    : rho0_(rho0), rho1_(rho1) {
  if (rho0.measure_ptr() != rho1.measure_ptr()) {
    throw ConfigError("monotone transport needs both densities on the same axis measure");
  }
  const std::vector<double> g0 = mass_values(rho0_), g1 = mass_values(rho1_);
  C0_ = cumulative(g0, rho0_.step());
  C1_ = cumulative(g1, rho1_.step());
  if (!(C0_.back() > 0.0) || !(C1_.back() > 0.0)) throw ConfigError("transport between massless densities");
  const double ratio = C1_.back() / C0_.back();
  T_.resize(rho0_.size());
  dT_.resize(rho0_.size());
  for (std::size_t i = 0; i < rho0_.size(); ++i) {
    T_[i] = target_quantile(C0_[i] * ratio);
    const double gt = interpolate_grid(g1, rho1_.lo(), rho1_.step(), T_[i]);
    dT_[i] = gt > 0.0 ? g0[i] / gt * ratio : kInf;
  }
}

double MonotoneTransport::source_cdf(double s) const {
  if (s <= rho0_.lo()) return 0.0;
  if (s >= rho0_.hi()) return C0_.back();
  const double h = rho0_.step();
  const double pos = (s - rho0_.lo()) / h;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), rho0_.size() - 2);
  // Cell-local cubic of rho * w from the four surrounding nodes.
  const std::size_t m = rho0_.size();
  const std::size_t j0 = std::min<std::size_t>(i == 0 ? 0 : i - 1, m - 4);
  double gv[4];
  for (int k = 0; k < 4; ++k) gv[k] = rho0_[j0 + k] * rho0_.measure().density(rho0_.node(j0 + k));
  const auto a = cubic_coefficients(gv[0], gv[1], gv[2], gv[3]);
  const double off = static_cast<double>(i - j0);
  return C0_[i] + h * (cubic_antiderivative(a, off + pos - static_cast<double>(i)) - cubic_antiderivative(a, off));
}

double MonotoneTransport::target_quantile(double mass) const {
  if (mass <= 0.0) return rho1_.lo();
  if (mass >= C1_.back()) return rho1_.hi();
  const auto it = std::upper_bound(C1_.begin(), C1_.end(), mass);
  const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - C1_.begin() - 1, 0));
  const std::size_t m = rho1_.size();
  const std::size_t cell = std::min(i, m - 2);
  const std::size_t j0 = std::min<std::size_t>(cell == 0 ? 0 : cell - 1, m - 4);
  double gv[4];
  for (int k = 0; k < 4; ++k) gv[k] = rho1_[j0 + k] * rho1_.measure().density(rho1_.node(j0 + k));
  const auto a = cubic_coefficients(gv[0], gv[1], gv[2], gv[3]);
  const double off = static_cast<double>(cell - j0);
  const double h = rho1_.step();
  const double need = (mass - C1_[cell]) / h;
  const double base = cubic_antiderivative(a, off);
  auto F = [&](double tau) { return cubic_antiderivative(a, off + tau) - base - need; };
  double flo = F(0.0), fhi = F(1.0);
  double tau;
  if (flo >= 0.0) {
    tau = 0.0;
  } else if (fhi <= 0.0) {
    tau = 1.0;
  } else {
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(F, 0.0, 1.0, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    tau = 0.5 * (r.first + r.second);
  }
  return rho1_.node(cell) + h * tau;
}

double MonotoneTransport::map(double s) const {
  return target_quantile(source_cdf(s) * C1_.back() / C0_.back());
}

double MonotoneTransport::slope(double s) const {
  const double g1 = rho1_.mass_density(map(s));
  return g1 > 0.0 ? rho0_.mass_density(s) / g1 * C1_.back() / C0_.back() : kInf;
}

double MonotoneTransport::jacobian_at(double t, std::size_t i) const {
  const double s = rho0_.node(i);
  const double ws = rho0_.measure().density(s);
  const double F = (1.0 - t) * s + t * T_[i];
  const double dF = (1.0 - t) + t * dT_[i];
  return rho0_.measure().density(F) * dF / ws;
}

DensityField MonotoneTransport::interpolate(double t) const {
  if (t <= 0.0) return rho0_;
  const std::size_t m = rho0_.size();
  const double lo = (1.0 - t) * rho0_.lo() + t * T_.front();
  const double hi = (1.0 - t) * rho0_.hi() + t * T_.back();
  std::vector<double> Ft(m);
  for (std::size_t i = 0; i < m; ++i) Ft[i] = (1.0 - t) * rho0_.node(i) + t * T_[i];
  const AxisMeasure& meas = rho0_.measure();
  const int n = meas.space().dim();
  std::vector<double> out(m);
  const double h = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    const double z = j + 1 == m ? hi : lo + h * static_cast<double>(j);
    const auto it = std::upper_bound(Ft.begin(), Ft.end(), z);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - Ft.begin() - 1, 0)), m - 2);
    double s;
    if (Ft[i] >= z) {
      s = rho0_.node(i);
    } else if (Ft[i + 1] <= z) {
      s = rho0_.node(i + 1);
    } else {
      auto G = [&](double u) { return displacement(t, u) - z; };
      boost::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(G, rho0_.node(i), rho0_.node(i + 1), Ft[i] - z,
                                                       Ft[i + 1] - z, boost::math::tools::eps_tolerance<double>(50),
                                                       iters);
      s = 0.5 * (r.first + r.second);
    }
    const double dF = (1.0 - t) + t * slope(s);
    const double wz = meas.density(z);
    if (wz > 0.0) {
      out[j] = rho0_.mass_density(s) / (wz * dF);
    } else {
      // Pole of a zonal measure: limit of the Monge-Ampere quotient.
      out[j] = rho0_.value(s) / std::pow(dF, n) *
               std::exp(meas.weight().value(meas.space(), meas.point(z, meas.nodes().front())) -
                        meas.weight().value(meas.space(), meas.point(s, meas.nodes().front())));
    }
  }
  return DensityField(rho0_.measure_ptr(), lo, hi, std::move(out));
}

double MonotoneTransport::w2() const {
  const std::vector<double> g0 = mass_values(rho0_);
  std::vector<double> v(g0.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = T_[i] - rho0_.node(i);
    v[i] = d * d * g0[i];
  }
  return std::sqrt(std::max(0.0, simpson(v, rho0_.step()) / C0_.back()));
}

EntropyFunctional EntropyFunctional::renyi_entropy(const DimensionParams& params) {
  const double p = (params.c + 1.0) / params.c;
  EntropyFunctional e;
  e.id = "renyi";
  e.renyi = true;
  e.U = [p](double r) { return r > 0.0 ? p * r * (1.0 - std::pow(r, -1.0 / p)) : 0.0; };
  return e;
}

EntropyFunctional EntropyFunctional::boltzmann() {
  EntropyFunctional e;
  e.id = "boltzmann";
  e.U = [](double r) { return r > 0.0 ? r * std::log(r) : 0.0; };
  return e;
}

EntropyFunctional EntropyFunctional::custom(std::string id, std::function<double(double)> U) {
  EntropyFunctional e;
  e.id = std::move(id);
  e.U = std::move(U);
  return e;
}

EntropyFunctional EntropyFunctional::parse(const std::string& id, const DimensionParams& params) {
  if (id == "renyi") return renyi_entropy(params);
  if (id == "boltzmann") return boltzmann();
  throw ConfigError("unknown entropy functional '" + id + "' (expected renyi or boltzmann)");
}

bool moment_condition_holds(const AxisMeasure& measure, const DimensionParams& params) {
  if (measure.kind() == AxisKind::kZonal) return true;
  const WeightFunction& w = measure.weight();
  const double a = w.parameter();
  const bool polynomial_decay = 2.0 / params.c > params.n;
  if (w.preset() == "quadratic") return a > 0.0 || (a == 0.0 && polynomial_decay);
  if (w.preset() == "linear") return a == 0.0 && polynomial_decay;
  return polynomial_decay;
}

EntropyValue entropy_functional(const DensityField& rho, const DimensionParams& params,
                                const EntropyFunctional& U) {
  if (!U.renyi && !moment_condition_holds(rho.measure(), params)) {
    throw IntegrabilityError("functional '" + U.id +
                             "' needs int (1 + d^2)^{-1/c} dm < inf, which fails for this reference measure");
  }
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = U.U(rho[i]) * rho.measure().density(rho.node(i));
  return {U.id, simpson(v, rho.step())};
}

double interpolated_entropy(const MonotoneTransport& map, double t, const EntropyFunctional& U) {
  const DensityField& r0 = map.source();
  std::vector<double> v(r0.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = r0.measure().density(r0.node(i));
    if (w == 0.0 || r0[i] == 0.0) {
      v[i] = 0.0;
      continue;
    }
    const double J = map.jacobian_at(t, i);
    v[i] = U.U(r0[i] / J) * J * w;
  }
  return simpson(v, r0.step());
}

double fisher_information(const DensityField& rho, const DimensionParams& params) {
  const std::size_t m = rho.size();
  const double h = rho.step();
  const double e = 1.0 / (params.c + 1.0);
  std::vector<double> phi(m);
  for (std::size_t i = 0; i < m; ++i) phi[i] = std::pow(rho[i], e);
  auto deriv = [&](std::size_t i) {
    if (i >= 2 && i + 2 < m) {
      return (phi[i - 2] - 8.0 * phi[i - 1] + 8.0 * phi[i + 1] - phi[i + 2]) / (12.0 * h);
    }
    const bool left = i < 2;
    const double sgn = left ? 1.0 : -1.0;
    auto at = [&](std::size_t k) { return left ? phi[k] : phi[m - 1 - k]; };
    const std::size_t j = left ? i : m - 1 - i;
    if (j == 0) return sgn * (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    return sgn * (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
  };
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = deriv(i);
    if (rho[i] < 1e-12) {
      if (std::abs(d) < 1e-12) {
        v[i] = 0.0;
        continue;
      }
      return kInf;
    }
    v[i] = d * d / rho[i] * rho.measure().density(rho.node(i));
  }
  return simpson(v, h);
}

CheckReport dc_membership(const std::function<double(double)>& U, const DimensionParams& params,
                          std::size_t points) {
  const double p = (params.c + 1.0) / params.c;
  std::vector<double> r(points), u(points), phi(points);
  for (std::size_t k = 0; k < points; ++k) {
    r[k] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(k) / static_cast<double>(points - 1));
    u[k] = U(r[k]);
    phi[k] = std::pow(r[k], p) * U(std::pow(r[k], -p));
  }
  std::vector<double> margins;
  margins.push_back(-std::abs(U(0.0)));
  auto convexity = [&](const std::vector<double>& f) {
    double worst = kInf;
    for (std::size_t k = 1; k + 1 < points; ++k) {
      const double s1 = (f[k] - f[k - 1]) / (r[k] - r[k - 1]);
      const double s2 = (f[k + 1] - f[k]) / (r[k + 1] - r[k]);
      // Rounding allowance for the divided differences.
      const double fmax = std::max({std::abs(f[k - 1]), std::abs(f[k]), std::abs(f[k + 1])});
      const double noise = 8.0 * std::numeric_limits<double>::epsilon() * fmax / (r[k] - r[k - 1]);
      const double m = (s2 - s1 + noise) / (1.0 + std::abs(s1) + std::abs(s2));
      margins.push_back(std::isfinite(m) ? m : -kInf);
      worst = std::min(worst, margins.back());
    }
    return worst;
  };
  const double wu = convexity(u);
  const double wphi = convexity(phi);
  CheckReport rep = make_report("dc_membership", std::move(margins), 1e-8);
  rep.details["min_margin_U"] = wu;
  rep.details["min_margin_phi"] = wphi;
  rep.details["U0"] = U(0.0);
  return rep;
}

}  // namespace cdcheck
