#include "fplab/rational.hpp"

#include <cctype>
#include <cmath>

#include "fplab/error.hpp"

namespace fplab {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigInt(0);
    BigInt result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    BigInt c = binomial(n, k);
    if (!c.fits_ulong_p()) {
        raise(ErrorKind::Budget,
              "binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                  ") exceeds 64-bit range");
    }
    return c.get_ui();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void bad_rational(std::string_view text) {
    raise(ErrorKind::Parse, "cannot parse rational from '" + std::string(text) + "'");
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) bad_rational(text);

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) bad_rational(text);

    // num/den form
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_rational(text);
        BigInt n(std::string(num), 10);
        BigInt d(std::string(den), 10);
        if (d == 0) bad_rational(text);
        Rational q(n, d);
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }

    // decimal form with optional exponent: digits[.digits][e[±]digits]
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = s.substr(0, e);
        std::string_view exp = s.substr(e + 1);
        bool exp_neg = false;
        if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
            exp_neg = exp.front() == '-';
            exp.remove_prefix(1);
        }
        if (!all_digits(exp) || exp.size() > 6) bad_rational(text);
        for (char c : exp) exponent = exponent * 10 + (c - '0');
        if (exp_neg) exponent = -exponent;
    }

    std::string digits;
    long frac_digits = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        std::string_view whole = mantissa.substr(0, dot);
        std::string_view frac = mantissa.substr(dot + 1);
        if (whole.empty() && frac.empty()) bad_rational(text);
        if (!whole.empty() && !all_digits(whole)) bad_rational(text);
        if (!frac.empty() && !all_digits(frac)) bad_rational(text);
        digits = std::string(whole) + std::string(frac);
        frac_digits = static_cast<long>(frac.size());
    } else {
        if (!all_digits(mantissa)) bad_rational(text);
        digits = std::string(mantissa);
    }
    if (digits.empty()) bad_rational(text);

    BigInt num(digits, 10);
    BigInt den(1);
    long power = exponent - frac_digits;
    BigInt ten(10);
    if (power >= 0) {
        BigInt scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(power));
        num *= scale;
    } else {
        mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-power));
    }
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) {
        raise(ErrorKind::Parameter, "non-finite value has no rational form");
    }
    return Rational(value); // exact: every finite double is a binary rational
}

BigInt floor_to_int(const Rational& q) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

BigInt ceil_to_int(const Rational& q) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

double to_double(const Rational& q) {
    return q.get_d();
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace fplab
