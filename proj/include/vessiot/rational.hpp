#ifndef VESSIOT_RATIONAL_HPP
#define VESSIOT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vessiot {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer int_gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Integer int_lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

// gcd on Q: gcd of numerators over lcm of denominators.  Used for contents.
inline Rational rat_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return b < 0 ? Rational(-b) : b;
    if (b == 0) return a < 0 ? Rational(-a) : a;
    return Rational(int_gcd(rat_num(a), rat_num(b)), int_lcm(rat_den(a), rat_den(b)));
}

inline std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << rat_num(r);
    if (rat_den(r) != 1) os << "/" << rat_den(r);
    return os.str();
}

} // namespace vessiot

#endif
