#include "critlab/cfrac.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "critlab/errors.hpp"

namespace critlab {

Quotient::Quotient(std::int64_t r) : value_(r) {
  if (r < 1) throw DomainError("partial quotient must be >= 1, got " + std::to_string(r));
}

std::int64_t Quotient::value() const {
  if (is_infinite()) throw DomainError("terminal symbol has no integer value");
  return value_;
}

ContinuedFraction::ContinuedFraction(std::vector<Quotient> quotients, bool exhausted)
    : quotients_(std::move(quotients)), exhausted_(exhausted) {
  for (std::size_t i = 0; i + 1 < quotients_.size(); ++i) {
    if (quotients_[i].is_infinite())
      throw DomainError("terminal symbol must be the last entry");
  }
  if (ends_in_infinity()) exhausted_ = true;
}

ContinuedFraction::ContinuedFraction(std::initializer_list<Quotient> quotients, bool exhausted)
    : ContinuedFraction(std::vector<Quotient>(quotients), exhausted) {}

ContinuedFraction ContinuedFraction::golden(std::size_t depth) {
  return ContinuedFraction(std::vector<Quotient>(depth, Quotient(1)), false);
}

ContinuedFraction ContinuedFraction::lead_then_golden(std::int64_t lead, std::size_t depth) {
  std::vector<Quotient> q(depth, Quotient(1));
  if (depth > 0) q[0] = Quotient(lead);
  return ContinuedFraction(std::move(q), false);
}

ContinuedFraction ContinuedFraction::periodic(const std::vector<std::int64_t>& period,
                                              std::size_t depth) {
  if (period.empty()) throw DomainError("empty period");
  std::vector<Quotient> q;
  q.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) q.emplace_back(period[i % period.size()]);
  return ContinuedFraction(std::move(q), false);
}

bool ContinuedFraction::ends_in_infinity() const {
  return !quotients_.empty() && quotients_.back().is_infinite();
}

std::vector<std::int64_t> ContinuedFraction::finite_prefix() const {
  std::vector<std::int64_t> out;
  for (const auto& r : quotients_) {
    if (r.is_infinite()) break;
    out.push_back(r.value());
  }
  return out;
}

std::string ContinuedFraction::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < quotients_.size(); ++i) {
    if (i) os << ',';
    if (quotients_[i].is_infinite())
      os << "inf";
    else
      os << quotients_[i].value();
  }
  if (!exhausted_ && !quotients_.empty()) os << ",...";
  os << ']';
  return os.str();
}

ContinuedFraction cf_from_real(double x, int depth) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("cf_from_real: x must lie in (0,1)");
  if (depth < 1) throw DomainError("cf_from_real: depth must be >= 1");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<Quotient> out;
  double q_prev = 0.0;  // q_{m-1}, with q_{-1} = 0
  double q_cur = 1.0;   // q_m, with q_0 = 1
  double residual = x;
  for (int m = 0; m < depth; ++m) {
    const double y = 1.0 / residual;
    double r = std::floor(y);
    double frac = y - r;
    const double guard = 8.0 * eps * std::pow((r + 1.0) * q_cur + q_prev, 2);
    // A fractional part within the guard of 1 is a rounded-down integer.
    if (1.0 - frac <= guard * y) {
      r += 1.0;
      frac = 0.0;
    }
    if (r > 1e15) return ContinuedFraction(std::move(out), true);
    out.emplace_back(static_cast<std::int64_t>(r));
    const double q_next = r * q_cur + q_prev;
    q_prev = q_cur;
    q_cur = q_next;
    if (frac < 8.0 * eps * q_cur * q_cur) return ContinuedFraction(std::move(out), true);
    residual = frac;
  }
  return ContinuedFraction(std::move(out), false);
}

double real_from_cf(const ContinuedFraction& cf) {
  double value = 0.0;
  const auto& q = cf.quotients();
  for (auto it = q.rbegin(); it != q.rend(); ++it) {
    if (it->is_infinite()) {
      value = 0.0;
      continue;
    }
    value = 1.0 / (static_cast<double>(it->value()) + value);
  }
  return value;
}

Convergents convergents(const ContinuedFraction& cf, int m_max) {
  if (m_max < 0) throw DomainError("convergents: m_max must be >= 0");
  Convergents c;
  c.p.assign(1, 0);
  c.q.assign(1, 1);
  if (m_max == 0) return c;
  const auto& r = cf.quotients();
  if (static_cast<int>(r.size()) < m_max || r[m_max - 1].is_infinite())
    throw DomainError("convergents: need " + std::to_string(m_max) + " finite quotients, have " +
                      cf.to_string());
  c.p.push_back(1);
  c.q.push_back(r[0].value());
  for (int m = 1; m < m_max; ++m) {
    const std::int64_t rm = r[m].value();
    std::int64_t qn = 0;
    std::int64_t pn = 0;
    if (__builtin_mul_overflow(rm, c.q[m], &qn) || __builtin_add_overflow(qn, c.q[m - 1], &qn) ||
        __builtin_mul_overflow(rm, c.p[m], &pn) || __builtin_add_overflow(pn, c.p[m - 1], &pn)) {
      throw OverflowError(m + 1, "convergents: q_" + std::to_string(m + 1) +
                                     " exceeds the 64-bit integer range");
    }
    c.q.push_back(qn);
    c.p.push_back(pn);
  }
  return c;
}

ContinuedFraction gauss_shift(const ContinuedFraction& cf) {
  if (cf.empty()) throw DomainError("gauss_shift: empty expansion");
  if (cf[0].is_infinite()) throw DomainError("gauss_shift: undefined at rotation number 0");
  std::vector<Quotient> rest(cf.quotients().begin() + 1, cf.quotients().end());
  return ContinuedFraction(std::move(rest), cf.exhausted());
}

bool is_bounded_type(const ContinuedFraction& cf, std::int64_t bound) {
  for (const auto& r : cf.quotients()) {
    if (r.is_infinite() || r.value() > bound) return false;
  }
  return true;
}

namespace {

std::int64_t parse_int(const std::string& item) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(item, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse integer '" + item + "'");
  }
  if (used != item.size()) throw DomainError("cannot parse integer '" + item + "'");
  return static_cast<std::int64_t>(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

ContinuedFraction rational_cf(std::int64_t p, std::int64_t q) {
  if (q <= 0 || p < 0 || p >= q) throw DomainError("rational_cf: need 0 <= p < q");
  if (p == 0) return ContinuedFraction({}, true);
  std::vector<Quotient> out;
  std::int64_t a = q, b = p;
  while (b != 0) {
    out.emplace_back(a / b);
    const std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return ContinuedFraction(std::move(out), true);
}

ContinuedFraction parse_cf(const std::string& raw, int depth) {
  const std::string text = trim(raw);
  if (text.empty()) throw DomainError("empty rotation number");
  if (text == "golden") return ContinuedFraction::golden(static_cast<std::size_t>(depth));
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const std::int64_t p = parse_int(trim(text.substr(0, slash)));
    const std::int64_t q = parse_int(trim(text.substr(slash + 1)));
    return rational_cf(p, q);
  }
  if (text.find(',') == std::string::npos && text.find('.') != std::string::npos) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(text, &used);
    } catch (const std::exception&) {
      throw DomainError("cannot parse rotation number '" + text + "'");
    }
    if (used != text.size()) throw DomainError("cannot parse rotation number '" + text + "'");
    return cf_from_real(x, depth);
  }
  // Optional periodic tail in parentheses: "10,(1)" or "(2,1)".
  std::string head = text, period;
  if (const auto open = text.find('('); open != std::string::npos) {
    const auto close = text.find(')', open);
    if (close == std::string::npos || trim(text.substr(close + 1)) != "")
      throw DomainError("periodic part must be a final parenthesized block in '" + text + "'");
    head = text.substr(0, open);
    period = text.substr(open + 1, close - open - 1);
    if (trim(period).empty()) throw DomainError("empty periodic part in '" + text + "'");
  }
  auto split = [](const std::string& s) {
    std::vector<Quotient> q;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (item == "inf" || item == "oo")
        q.emplace_back(kInfinity);
      else
        q.emplace_back(parse_int(item));
    }
    return q;
  };
  std::vector<Quotient> q = split(head);
  if (period.empty()) {
    if (q.empty()) throw DomainError("empty quotient list");
    // A plain list is a complete finite expansion.
    return ContinuedFraction(std::move(q), true);
  }
  const std::vector<Quotient> per = split(period);
  for (const auto& r : per)
    if (r.is_infinite()) throw DomainError("the terminal symbol cannot be periodic");
  for (std::size_t i = 0; q.size() < static_cast<std::size_t>(depth); ++i) q.push_back(per[i % per.size()]);
  const std::size_t keep = std::max<std::size_t>(static_cast<std::size_t>(std::max(depth, 1)), 1);
  if (q.size() > keep) q.erase(q.begin() + static_cast<std::ptrdiff_t>(keep), q.end());
  return ContinuedFraction(std::move(q), false);
}

}  // namespace critlab
