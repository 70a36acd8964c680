#ifndef PHEAP_RATIONAL_HPP
#define PHEAP_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace pheap {

// Exact arbitrary-precision rational; every analysis-side quantity is
// kept in this form. No floating point on any analysis path.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string num_str(const Rational& r) { return numerator(r).str(); }
inline std::string den_str(const Rational& r) { return denominator(r).str(); }

inline std::string ratio_str(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace pheap

#endif  // PHEAP_RATIONAL_HPP
