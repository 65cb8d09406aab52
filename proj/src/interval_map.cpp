#include "critlab/interval_map.hpp"

#include <sstream>

#include "critlab/errors.hpp"

namespace critlab {

cplx MapNode::value(cplx) const {
  throw DomainError(describe() + " has no complex extension");
}

ComplexJet MapNode::cjet(cplx) const {
  throw DomainError(describe() + " has no complex extension");
}

namespace {

class LiftIterateNode final : public MapNode {
 public:
  LiftIterateNode(LiftIterate it, ext256 scale)
      : it_(std::move(it)), scale_(std::move(scale)), scale_d_(static_cast<double>(scale_)) {
    if (scale_ == 0) throw DomainError("lift iterate: zero scale");
  }

  double value(double x) const override {
    return with_precision(it_.base.precision(), [&](auto zero) {
      using T = decltype(zero);
      const T s(scale_);
      return static_cast<double>(it_.eval<T>(s * T(x)) / s);
    });
  }

  Jet jet(double x) const override {
    return with_precision(it_.base.precision(), [&](auto zero) {
      using T = decltype(zero);
      const T s(scale_);
      const auto [v, d] = it_.eval_jet<T>(s * T(x));
      return Jet{static_cast<double>(v / s), static_cast<double>(d)};
    });
  }

  cplx value(cplx z) const override { return it_(z * scale_d_) / scale_d_; }
  ComplexJet cjet(cplx z) const override {
    const ComplexJet j = it_.cjet(z * scale_d_);
    return {j.v / scale_d_, j.d};
  }
  bool has_complex_extension() const override { return it_.base.has_complex_extension(); }
  std::int64_t cost() const override { return std::max<std::int64_t>(it_.q, 1); }
  std::string describe() const override {
    std::ostringstream os;
    os << "T^-" << it_.p << " F^" << it_.q << " [" << it_.base.describe() << "]";
    if (scale_ != 1) os << " scaled by " << scale_d_;
    return os.str();
  }

 private:
  LiftIterate it_;
  ext256 scale_;
  double scale_d_;
};

class AffineNode final : public MapNode {
 public:
  AffineNode(RealMap f, double l) : f_(std::move(f)), l_(l) {
    if (l_ == 0.0) throw DomainError("affine conjugate: zero factor");
  }
  double value(double x) const override { return f_(l_ * x) / l_; }
  Jet jet(double x) const override {
    const Jet j = f_.jet(l_ * x);
    return {j.v / l_, j.d};
  }
  cplx value(cplx z) const override { return f_(z * l_) / l_; }
  ComplexJet cjet(cplx z) const override {
    const ComplexJet j = f_.cjet(z * l_);
    return {j.v / l_, j.d};
  }
  bool has_complex_extension() const override { return f_.has_complex_extension(); }
  std::int64_t cost() const override { return f_.cost(); }
  std::string describe() const override {
    std::ostringstream os;
    os << "affine(" << l_ << ")[" << f_.describe() << "]";
    return os.str();
  }

 private:
  RealMap f_;
  double l_;
};

class CompositionNode final : public MapNode {
 public:
  explicit CompositionNode(std::vector<RealMap> fs) : fs_(std::move(fs)) {}
  double value(double x) const override {
    for (auto it = fs_.rbegin(); it != fs_.rend(); ++it) x = (*it)(x);
    return x;
  }
  Jet jet(double x) const override {
    double d = 1.0;
    for (auto it = fs_.rbegin(); it != fs_.rend(); ++it) {
      const Jet j = it->jet(x);
      d *= j.d;
      x = j.v;
    }
    return {x, d};
  }
  cplx value(cplx z) const override {
    for (auto it = fs_.rbegin(); it != fs_.rend(); ++it) z = (*it)(z);
    return z;
  }
  ComplexJet cjet(cplx z) const override {
    cplx d = 1.0;
    for (auto it = fs_.rbegin(); it != fs_.rend(); ++it) {
      const ComplexJet j = it->cjet(z);
      d *= j.d;
      z = j.v;
    }
    return {z, d};
  }
  bool has_complex_extension() const override {
    for (const auto& f : fs_)
      if (!f.has_complex_extension()) return false;
    return true;
  }
  std::int64_t cost() const override {
    std::int64_t c = 0;
    for (const auto& f : fs_) c += f.cost();
    return c;
  }
  std::string describe() const override {
    std::string s;
    for (std::size_t i = 0; i < fs_.size(); ++i) {
      if (i) s += " o ";
      s += "(" + fs_[i].describe() + ")";
    }
    return s;
  }

 private:
  std::vector<RealMap> fs_;
};

class PowerNode final : public MapNode {
 public:
  PowerNode(RealMap f, std::int64_t n) : f_(std::move(f)), n_(n) {}
  double value(double x) const override {
    for (std::int64_t i = 0; i < n_; ++i) x = f_(x);
    return x;
  }
  Jet jet(double x) const override {
    double d = 1.0;
    for (std::int64_t i = 0; i < n_; ++i) {
      const Jet j = f_.jet(x);
      d *= j.d;
      x = j.v;
    }
    return {x, d};
  }
  cplx value(cplx z) const override {
    for (std::int64_t i = 0; i < n_; ++i) z = f_(z);
    return z;
  }
  ComplexJet cjet(cplx z) const override {
    cplx d = 1.0;
    for (std::int64_t i = 0; i < n_; ++i) {
      const ComplexJet j = f_.cjet(z);
      d *= j.d;
      z = j.v;
    }
    return {z, d};
  }
  bool has_complex_extension() const override { return f_.has_complex_extension(); }
  std::int64_t cost() const override { return n_ * f_.cost(); }
  std::string describe() const override {
    return "(" + f_.describe() + ")^" + std::to_string(n_);
  }

 private:
  RealMap f_;
  std::int64_t n_;
};

class FunctionNode final : public MapNode {
 public:
  FunctionNode(std::string name, std::function<double(double)> f, std::function<double(double)> df,
               std::function<cplx(cplx)> fz, std::function<cplx(cplx)> dfz)
      : name_(std::move(name)), f_(std::move(f)), df_(std::move(df)), fz_(std::move(fz)),
        dfz_(std::move(dfz)) {}
  double value(double x) const override { return f_(x); }
  Jet jet(double x) const override {
    if (df_) return {f_(x), df_(x)};
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return {f_(x), (f_(x + h) - f_(x - h)) / (2 * h)};
  }
  cplx value(cplx z) const override {
    if (!fz_) return MapNode::value(z);
    return fz_(z);
  }
  ComplexJet cjet(cplx z) const override {
    if (!fz_) return MapNode::cjet(z);
    if (dfz_) return {fz_(z), dfz_(z)};
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    return {fz_(z), (fz_(z + h) - fz_(z - h)) / (2 * h)};
  }
  bool has_complex_extension() const override { return static_cast<bool>(fz_); }
  std::int64_t cost() const override { return 1; }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
  std::function<cplx(cplx)> fz_;
  std::function<cplx(cplx)> dfz_;
};

void check_cost(std::int64_t cost, std::int64_t cap) {
  if (cost > cap)
    throw BudgetError("composed map needs " + std::to_string(cost) +
                      " evaluations per point, cap is " + std::to_string(cap));
}

}  // namespace

RealMap RealMap::lift_iterate(const LiftIterate& it, const ext256& scale) {
  if (it.q < 0) throw DomainError("lift iterate: q must be >= 0");
  return RealMap(std::make_shared<LiftIterateNode>(it, scale));
}

RealMap RealMap::affine_conjugate(const RealMap& f, double l) {
  return RealMap(std::make_shared<AffineNode>(f, l));
}

RealMap RealMap::compose(std::vector<RealMap> fs, std::int64_t cost_cap) {
  if (fs.empty()) throw DomainError("compose: empty list");
  if (fs.size() == 1) return fs.front();
  auto node = std::make_shared<CompositionNode>(std::move(fs));
  check_cost(node->cost(), cost_cap);
  return RealMap(node);
}

RealMap RealMap::power(const RealMap& f, std::int64_t n, std::int64_t cost_cap) {
  if (n < 0) throw DomainError("power: negative exponent");
  if (n == 1) return f;
  auto node = std::make_shared<PowerNode>(f, n);
  check_cost(node->cost(), cost_cap);
  return RealMap(node);
}

RealMap RealMap::function(std::string name, std::function<double(double)> f,
                          std::function<double(double)> df, std::function<cplx(cplx)> fz,
                          std::function<cplx(cplx)> dfz) {
  if (!f) throw DomainError("function map needs an evaluator");
  return RealMap(std::make_shared<FunctionNode>(std::move(name), std::move(f), std::move(df),
                                                std::move(fz), std::move(dfz)));
}

}  // namespace critlab
