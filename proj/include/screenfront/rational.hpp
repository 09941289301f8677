#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace screenfront {

using Rational = mpq_class;

/// Shortest round-trip decimal of d when it has at most 15 significant digits,
/// otherwise the simplest fraction that rounds to d.
Rational to_rational(double d);
/// Nearest double.
double to_double(const Rational& r);
std::string to_string(const Rational& r);

std::vector<Rational> to_rational(const std::vector<double>& v);

}  // namespace screenfront
