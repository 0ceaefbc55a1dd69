#include "qmin/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace qmin {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class pow10(long exponent) {
    mpz_class result;
    mpz_ui_pow_ui(result.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    return result;
}

[[noreturn]] void bad(std::string_view text) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) bad(text);

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        bool negative = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            negative = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den)) bad(text);
        mpz_class p(std::string(num), 10);
        mpz_class q(std::string(den), 10);
        if (q == 0) bad(text);
        Rational r(negative ? mpz_class(-p) : p, q);
        r.canonicalize();
        return r;
    }

    std::string_view body = text;
    bool negative = false;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = body.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6) bad(text);
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        body = body.substr(0, e);
    }
    std::string_view int_part = body;
    std::string_view frac_part;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        int_part = body.substr(0, dot);
        frac_part = body.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) bad(text);
    if (!int_part.empty() && !all_digits(int_part)) bad(text);
    if (!frac_part.empty() && !all_digits(frac_part)) bad(text);

    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class mantissa(digits, 10);
    exponent -= static_cast<long>(frac_part.size());
    Rational r;
    if (exponent >= 0) {
        r = Rational(mantissa * pow10(exponent));
    } else {
        r = Rational(mantissa, pow10(-exponent));
    }
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits, bool trim) {
    if (digits < 0) throw std::invalid_argument("digits must be non-negative");
    const bool negative = sgn(value) < 0;
    Rational magnitude = abs(value);
    const mpz_class scale = pow10(digits);
    Rational scaled = magnitude * scale;
    mpz_class floor_part = scaled.get_num() / scaled.get_den();
    Rational remainder = scaled - Rational(floor_part);
    const Rational half(1, 2);
    if (remainder > half || (remainder == half && mpz_odd_p(floor_part.get_mpz_t()))) {
        floor_part += 1;
    }

    std::string body = floor_part.get_str();
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits)) {
            body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
        }
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
        if (trim) {
            while (body.back() == '0') body.pop_back();
            if (body.back() == '.') body.pop_back();
        }
    }
    if (negative && floor_part != 0) body.insert(0, "-");
    return body;
}

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace qmin
