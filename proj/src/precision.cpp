#include "critlab/precision.hpp"

#include "critlab/errors.hpp"

namespace critlab {

Precision parse_precision(std::string_view s) {
  if (s == "double") return Precision::Double;
  if (s == "ext128" || s == "extended:128") return Precision::Ext128;
  if (s == "ext256" || s == "extended:256") return Precision::Ext256;
  throw DomainError("unknown precision '" + std::string(s) +
                    "' (double|ext128|ext256|extended:128|extended:256)");
}

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Double:
      return "double";
    case Precision::Ext128:
      return "ext128";
    case Precision::Ext256:
      return "ext256";
  }
  return "?";
}

int mantissa_bits(Precision p) {
  switch (p) {
    case Precision::Ext128:
      return 128;
    case Precision::Ext256:
      return 256;
    case Precision::Double:
    default:
      return 53;
  }
}

}  // namespace critlab
