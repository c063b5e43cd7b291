#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdcheck/model_space.hpp"

namespace cdcheck {

// Finitely supported probability measure.
struct DiscreteMeasure {
  std::vector<Point> support;
  std::vector<double> weights;

  std::size_t size() const { return support.size(); }
  // Throws ConfigError unless weights are positive and sum to 1 (1e-12) and
  // every point lies on the model.
  void validate(const ModelSpace& space) const;

  static DiscreteMeasure uniform(std::vector<Point> support);
  static DiscreteMeasure from_json(const nlohmann::json& j, const ModelSpace& space);
  nlohmann::json to_json() const;
};

struct PlanEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;
  double cost = 0.0;  // sum of mass * d^2
  double w2 = 0.0;

  std::vector<double> row_marginal(std::size_t n) const;
  std::vector<double> column_marginal(std::size_t m) const;
};

inline constexpr std::size_t kMaxDiscreteSupport = 512;

// Exact optimal plan for the squared-distance cost (successive shortest
// paths on the transportation network). SizeError past kMaxDiscreteSupport.
TransportPlan solve_discrete_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ModelSpace& space);

// Same solver on an explicit cost matrix (rows: sources).
TransportPlan solve_transport(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<std::vector<double>>& cost);

}  // namespace cdcheck
