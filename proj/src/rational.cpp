#include "gridsing/rational.hpp"

#include <cctype>
#include <cmath>

#include "gridsing/error.hpp"

namespace gridsing {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SearchExhausted: return "SearchExhausted";
        case ErrorCode::DivergentIntegral: return "DivergentIntegral";
        case ErrorCode::InconclusiveTolerance: return "InconclusiveTolerance";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::NodeNotInSet: return "NodeNotInSet";
        case ErrorCode::DeltaNotFound: return "DeltaNotFound";
        case ErrorCode::ContainmentFailure: return "ContainmentFailure";
    }
    return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

Integer parse_integer(std::string_view s) {
    if (!is_integer_literal(s)) {
        throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(s) + "'");
    }
    std::string buf(s.front() == '+' ? s.substr(1) : s);
    return Integer(buf, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
        if (whole.empty()) whole = "0";
        if (frac.empty() || !is_integer_literal(frac) || frac.front() == '-' || frac.front() == '+') {
            throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
        }
        Integer den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        Rational q(parse_integer(whole) * den + parse_integer(frac), den);
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
    return Rational(x);
}

double to_double(const Rational& q) { return q.get_d(); }

Integer floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer round_half_up(const Rational& q) {
    return floor(Rational(q + Rational(1, 2)));
}

}  // namespace gridsing
