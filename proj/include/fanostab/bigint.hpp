#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace fano {

// All dimension bookkeeping is exact: representation dimensions overflow
// 64 bits already for moderate rank and twist.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

} // namespace fano
