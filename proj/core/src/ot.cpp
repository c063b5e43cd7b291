#include "cdcheck/ot.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "cdcheck/errors.hpp"

namespace cdcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Residual masses below this are treated as exhausted.
constexpr double kMassEps = 1e-15;

}  // namespace

void DiscreteMeasure::validate(const ModelSpace& space) const {
  if (support.empty()) throw ConfigError("discrete measure with empty support");
  if (support.size() != weights.size()) throw ConfigError("discrete measure: points and weights differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
      throw ConfigError("discrete measure weights must be positive");
    }
    if (support[k].size() != space.ambient_dim() || !space.contains(support[k], 1e-9)) {
      throw ConfigError("discrete measure point " + std::to_string(k) + " is not on " + space.describe());
    }
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("discrete measure weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> support) {
  DiscreteMeasure m;
  m.weights.assign(support.size(), 1.0 / static_cast<double>(support.size()));
  m.support = std::move(support);
  return m;
}

DiscreteMeasure DiscreteMeasure::from_json(const nlohmann::json& j, const ModelSpace& space) {
  if (!j.is_object() || !j.contains("points") || !j.contains("weights")) {
    throw ConfigError("discrete measure JSON needs 'points' and 'weights'");
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "points" && key != "weights") throw ConfigError("unknown field '" + key + "' in discrete measure");
  }
  DiscreteMeasure m;
  try {
    for (const auto& p : j.at("points")) {
      const auto v = p.get<std::vector<double>>();
      m.support.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    m.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed discrete measure: ") + e.what());
  }
  m.validate(space);
  return m;
}

nlohmann::json DiscreteMeasure::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : support) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  return {{"points", pts}, {"weights", weights}};
}

std::vector<double> TransportPlan::row_marginal(std::size_t n) const {
  std::vector<double> r(n, 0.0);
  for (const auto& e : entries) r[e.i] += e.mass;
  return r;
}

std::vector<double> TransportPlan::column_marginal(std::size_t m) const {
  std::vector<double> r(m, 0.0);
  for (const auto& e : entries) r[e.j] += e.mass;
  return r;
}

TransportPlan solve_transport(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<std::vector<double>>& cost) {
  const std::size_t n = a.size(), m = b.size();
  if (n > kMaxDiscreteSupport || m > kMaxDiscreteSupport) {
    throw SizeError("exact transport is capped at " + std::to_string(kMaxDiscreteSupport) + " support points");
  }
  if (cost.size() != n) throw ConfigError("cost matrix row count mismatch");
  for (const auto& row : cost) {
    if (row.size() != m) throw ConfigError("cost matrix column count mismatch");
  }

  // Nodes: 0..n-1 sources, n..n+m-1 sinks. The super source and super sink
  // are implicit: a path starts at a source with residual supply and ends at
  // a sink with residual demand.
  std::vector<double> supply = a, demand = b;
  std::vector<std::vector<double>> flow(n, std::vector<double>(m, 0.0));
  std::vector<double> pot(n + m, 0.0);
  std::vector<double> dist(n + m);
  std::vector<std::ptrdiff_t> prev(n + m);
  std::vector<char> done(n + m);

  const std::size_t max_rounds = 4 * (n + m) * (n + m) + 16;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool any_supply = false, any_demand = false;
    for (double s : supply) any_supply |= s > kMassEps;
    for (double d : demand) any_demand |= d > kMassEps;
    if (!any_supply || !any_demand) break;

    // Dijkstra on reduced costs. Sources with residual supply keep potential
    // zero throughout, so all of them start at distance zero.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t i = 0; i < n; ++i) {
      if (supply[i] > kMassEps) {
        dist[i] = 0.0;
        heap.push({0.0, i});
      }
    }
    std::ptrdiff_t sink = -1;
    while (!heap.empty()) {
      const auto [du, uu] = heap.top();
      heap.pop();
      if (done[uu] || du > dist[uu]) continue;
      done[uu] = 1;
      if (uu >= n && demand[uu - n] > kMassEps) {
        sink = static_cast<std::ptrdiff_t>(uu);
        break;
      }
      if (uu < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const double nd = du + std::max(cost[uu][j] + pot[uu] - pot[n + j], 0.0);
          if (nd < dist[n + j]) {
            dist[n + j] = nd;
            prev[n + j] = static_cast<std::ptrdiff_t>(uu);
            heap.push({nd, n + j});
          }
        }
      } else {
        const std::size_t j = uu - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (flow[i][j] <= kMassEps) continue;
          const double nd = du + std::max(-cost[i][j] + pot[uu] - pot[i], 0.0);
          if (nd < dist[i]) {
            dist[i] = nd;
            prev[i] = static_cast<std::ptrdiff_t>(uu);
            heap.push({nd, i});
          }
        }
      }
    }
    if (sink < 0) break;
    const double reach = dist[sink];
    for (std::size_t k = 0; k < n + m; ++k) pot[k] += done[k] ? dist[k] : reach;

    // Bottleneck along the path.
    double push = demand[sink - n];
    std::ptrdiff_t v = sink;
    while (prev[v] >= 0) {
      const std::ptrdiff_t u = prev[v];
      if (static_cast<std::size_t>(u) >= n) push = std::min(push, flow[v][u - n]);
      v = u;
    }
    push = std::min(push, supply[v]);

    v = sink;
    while (prev[v] >= 0) {
      const std::ptrdiff_t u = prev[v];
      if (static_cast<std::size_t>(u) < n) {
        flow[u][v - n] += push;
      } else {
        flow[v][u - n] -= push;
      }
      v = u;
    }
    supply[v] -= push;
    demand[sink - n] -= push;
  }

  TransportPlan plan;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (flow[i][j] > kMassEps) {
        plan.entries.push_back({i, j, flow[i][j]});
        plan.cost += flow[i][j] * cost[i][j];
      }
    }
  }
  plan.w2 = std::sqrt(std::max(plan.cost, 0.0));
  return plan;
}

TransportPlan solve_discrete_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ModelSpace& space) {
  if (mu.size() > kMaxDiscreteSupport || nu.size() > kMaxDiscreteSupport) {
    throw SizeError("exact transport is capped at " + std::to_string(kMaxDiscreteSupport) + " support points, got " +
                    std::to_string(std::max(mu.size(), nu.size())));
  }
  mu.validate(space);
  nu.validate(space);
  std::vector<std::vector<double>> cost(mu.size(), std::vector<double>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const double d = space.distance(mu.support[i], nu.support[j]);
      cost[i][j] = d * d;
    }
  }
  return solve_transport(mu.weights, nu.weights, cost);
}

}  // namespace cdcheck
