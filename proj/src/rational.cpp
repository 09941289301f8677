#include "screenfront/rational.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "screenfront/model.hpp"

namespace screenfront {

namespace {

mpz_class floor_of(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// Simplest fraction strictly between lo and hi, 0 <= lo < hi.
Rational simplest_between(Rational lo, Rational hi) {
    // continued fraction walk; terms accumulate into convergents
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (;;) {
        mpz_class a = floor_of(lo);
        if (Rational(a + 1) < hi) {
            mpz_class t = a + 1;
            Rational r(t * p1 + p0, t * q1 + q0);
            r.canonicalize();
            return r;
        }
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        Rational frac_lo = lo - Rational(a);
        Rational frac_hi = hi - Rational(a);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (frac_lo == 0) {
            // lower end is the integer a itself: next term is the smallest integer above 1/frac_hi
            Rational inv = 1 / frac_hi;
            mpz_class t = floor_of(inv) + 1;
            Rational r(t * p1 + p0, t * q1 + q0);
            r.canonicalize();
            return r;
        }
        lo = 1 / frac_hi;
        hi = 1 / frac_lo;
    }
}

// Exact value of a decimal literal from to_chars.
Rational decimal_value(const std::string& text, int& significant) {
    std::string digits;
    long exponent = 0;
    bool point = false;
    std::size_t i = 0;
    for (; i < text.size() && text[i] != 'e'; ++i) {
        if (text[i] == '.') {
            point = true;
            continue;
        }
        digits += text[i];
        if (point) --exponent;
    }
    if (i < text.size()) exponent += std::stol(text.substr(i + 1));
    std::size_t first = digits.find_first_not_of('0');
    std::size_t last = digits.find_last_not_of('0');
    significant = first == std::string::npos ? 0 : static_cast<int>(last - first + 1);
    mpz_class num(digits, 10), p;
    mpz_class ten = 10;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exponent)));
    Rational r = exponent >= 0 ? Rational(num * p) : Rational(num, p);
    r.canonicalize();
    return r;
}

}  // namespace

Rational to_rational(double d) {
    if (!std::isfinite(d)) throw InputError("cannot convert a non-finite value to a rational");
    if (d == 0.0) return 0;
    if (d == std::floor(d) && std::abs(d) < 9e15) return Rational(d);
    double a = std::abs(d);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, a);
    int significant = 0;
    Rational dec = decimal_value(std::string(buf, res.ptr), significant);
    if (significant <= 15) return d < 0 ? Rational(-dec) : dec;
    Rational x(a);
    Rational below(std::nextafter(a, 0.0));
    Rational above(std::nextafter(a, INFINITY));
    Rational lo = (below + x) / 2;
    Rational hi = (x + above) / 2;
    Rational r = simplest_between(lo, hi);
    return d < 0 ? Rational(-r) : r;
}

double to_double(const Rational& r) {
    double t = r.get_d();  // truncated toward zero
    double away = std::nextafter(t, r < 0 ? -INFINITY : INFINITY);
    return ::abs(Rational(away) - r) < ::abs(Rational(t) - r) ? away : t;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::vector<Rational> to_rational(const std::vector<double>& v) {
    std::vector<Rational> out;
    out.reserve(v.size());
    for (double d : v) out.push_back(to_rational(d));
    return out;
}

}  // namespace screenfront
