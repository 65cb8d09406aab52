#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "critlab/circle_maps.hpp"

namespace critlab {

// Default cap on elementary evaluations per point for composed maps.
inline constexpr std::int64_t kDefaultCostCap = 100'000;

// One node of an evaluation tree for a real-analytic interval map.
class MapNode {
 public:
  virtual ~MapNode() = default;
  virtual double value(double x) const = 0;
  virtual Jet jet(double x) const = 0;
  virtual cplx value(cplx z) const;
  virtual ComplexJet cjet(cplx z) const;
  virtual bool has_complex_extension() const { return false; }
  // Elementary evaluations per point (lift steps, closures).
  virtual std::int64_t cost() const = 0;
  virtual std::string describe() const = 0;
};

// Immutable handle to an evaluation tree. Copies share the tree.
class RealMap {
 public:
  RealMap() = default;
  explicit RealMap(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}

  // x -> (T^{-p} F^q (s x)) / s, evaluated in the lift's precision.
  static RealMap lift_iterate(const LiftIterate& it, const ext256& scale = ext256(1));
  // x -> f(l x) / l.
  static RealMap affine_conjugate(const RealMap& f, double l);
  // fs[0] o fs[1] o ... (the last map is applied first).
  static RealMap compose(std::vector<RealMap> fs, std::int64_t cost_cap = kDefaultCostCap);
  static RealMap power(const RealMap& f, std::int64_t n, std::int64_t cost_cap = kDefaultCostCap);
  static RealMap function(std::string name, std::function<double(double)> f,
                          std::function<double(double)> df = {},
                          std::function<cplx(cplx)> fz = {}, std::function<cplx(cplx)> dfz = {});

  bool valid() const { return static_cast<bool>(node_); }
  double operator()(double x) const { return node_->value(x); }
  cplx operator()(cplx z) const { return node_->value(z); }
  Jet jet(double x) const { return node_->jet(x); }
  ComplexJet cjet(cplx z) const { return node_->cjet(z); }
  bool has_complex_extension() const { return node_->has_complex_extension(); }
  std::int64_t cost() const { return node_->cost(); }
  std::string describe() const { return node_->describe(); }
  const std::shared_ptr<const MapNode>& node() const { return node_; }

 private:
  std::shared_ptr<const MapNode> node_;
};

}  // namespace critlab
