#include "fairdiv/rational.hpp"

#include "fairdiv/error.hpp"

#include <ostream>

namespace fairdiv {

Rational::Rational(long num, long den) {
    if (den == 0) fail(Errc::parse_error, "rational with zero denominator");
    v_ = mpq_class(mpz_class(num), mpz_class(den));
    v_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
    if (s.empty()) fail(Errc::parse_error, "empty rational string");
    const auto slash = s.find('/');
    try {
        mpz_class num, den;
        if (slash == std::string::npos) {
            num = mpz_class(s);
            den = 1;
        } else {
            num = mpz_class(s.substr(0, slash));
            den = mpz_class(s.substr(slash + 1));
        }
        if (sgn(den) == 0) fail(Errc::parse_error, "zero denominator in '" + s + "'");
        Rational r;
        r.v_ = mpq_class(num, den);
        r.v_.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        fail(Errc::parse_error, "malformed rational '" + s + "'");
    }
}

std::string Rational::str() const { return v_.get_str(); }

long Rational::ceil_long() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    if (!q.fits_slong_p()) fail(Errc::parse_error, "ceil out of range: " + str());
    return q.get_si();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) fail(Errc::parse_error, "division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace fairdiv
