#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace critlab {

// Terminal symbol of a continued fraction; 1/inf is read as 0.
struct Infinity {
  friend bool operator==(Infinity, Infinity) { return true; }
};
inline constexpr Infinity kInfinity{};

// A partial quotient: a positive integer or the terminal symbol.
class Quotient {
 public:
  Quotient(std::int64_t r);  // NOLINT(google-explicit-constructor)
  Quotient(Infinity) : value_(0) {}  // NOLINT(google-explicit-constructor)

  bool is_infinite() const { return value_ == 0; }
  // Precondition: !is_infinite().
  std::int64_t value() const;

  friend bool operator==(const Quotient& a, const Quotient& b) {
    return a.value_ == b.value_;
  }

 private:
  std::int64_t value_;  // 0 encodes the terminal symbol
};

// Partial quotients [r_0, r_1, ...]. Every finite entry is >= 1 and the
// terminal symbol can only be last. `exhausted` means the sequence is
// complete (rational value or terminated by the symbol) rather than truncated.
class ContinuedFraction {
 public:
  ContinuedFraction() = default;
  ContinuedFraction(std::vector<Quotient> quotients, bool exhausted);
  ContinuedFraction(std::initializer_list<Quotient> quotients, bool exhausted = false);

  static ContinuedFraction golden(std::size_t depth);
  // [lead, 1, 1, ...] with `depth` entries in total.
  static ContinuedFraction lead_then_golden(std::int64_t lead, std::size_t depth);
  // Repeats `period` until `depth` entries.
  static ContinuedFraction periodic(const std::vector<std::int64_t>& period, std::size_t depth);

  const std::vector<Quotient>& quotients() const { return quotients_; }
  std::size_t size() const { return quotients_.size(); }
  bool empty() const { return quotients_.empty(); }
  bool exhausted() const { return exhausted_; }
  bool ends_in_infinity() const;
  const Quotient& operator[](std::size_t i) const { return quotients_[i]; }

  // Finite entries only; stops before a terminal symbol.
  std::vector<std::int64_t> finite_prefix() const;
  std::string to_string() const;

  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;

 private:
  std::vector<Quotient> quotients_;
  bool exhausted_ = false;
};

// Convergents p_m/q_m, m = 0..m_max, with q_0 = 1, q_1 = r_0, p_0 = 0, p_1 = 1.
struct Convergents {
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> q;
};

// First <= depth quotients of x in (0,1). Throws DomainError outside (0,1).
ContinuedFraction cf_from_real(double x, int depth);

// Backward-recurrence value. An empty expansion is 0; a trailing terminal
// symbol contributes 0.
double real_from_cf(const ContinuedFraction& cf);

// Throws DomainError if cf has fewer than m_max finite entries (m_max >= 1
// needs r_0..r_{m_max-1}), OverflowError naming the level m at which q_m or
// p_m left the 64-bit range.
Convergents convergents(const ContinuedFraction& cf, int m_max);

// Drops r_0. Throws DomainError on an empty expansion or a leading symbol.
ContinuedFraction gauss_shift(const ContinuedFraction& cf);

bool is_bounded_type(const ContinuedFraction& cf, std::int64_t bound);

// Exact expansion of p/q, 0 <= p < q.
ContinuedFraction rational_cf(std::int64_t p, std::int64_t q);

// Accepted forms:
//   "3,3" or "3,3,inf"   complete finite expansion (rational)
//   "10,(1)" / "(2,1)"  eventually periodic, expanded to `depth` quotients
//   "golden"            [1,1,...] to `depth`
//   "3/10"              exact rational
//   "0.25"              decimal in (0,1), expanded to `depth` quotients
ContinuedFraction parse_cf(const std::string& text, int depth);

}  // namespace critlab
