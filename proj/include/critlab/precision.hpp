#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace critlab {

// Working precision of orbit computations. Extended modes carry at least the
// named number of mantissa bits.
enum class Precision { Double, Ext128, Ext256 };

using ext128 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using ext256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

Precision parse_precision(std::string_view s);
std::string to_string(Precision p);
int mantissa_bits(Precision p);

// Calls f with a value-initialised scalar of the type matching p.
template <class F>
decltype(auto) with_precision(Precision p, F&& f) {
  switch (p) {
    case Precision::Ext128:
      return f(ext128{});
    case Precision::Ext256:
      return f(ext256{});
    case Precision::Double:
    default:
      return f(double{});
  }
}

}  // namespace critlab
