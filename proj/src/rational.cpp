#include "netform/rational.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

namespace netform {

namespace {

wide_int gcd_wide(wide_int a, wide_int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        wide_int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr wide_int kMax = INT64_MAX;
constexpr wide_int kMin = INT64_MIN;

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Rational Rational::from_wide(wide_int num, wide_int den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const wide_int g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num > kMax || num < kMin || den > kMax) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return {parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text)};
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        bool negative = !int_part.empty() && int_part.front() == '-';
        if (negative || (!int_part.empty() && int_part.front() == '+')) int_part.remove_prefix(1);
        if (frac_part.size() > 17 || (int_part.empty() && frac_part.empty())) {
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        }
        std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
        std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
        if (frac < 0 || whole < 0) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        wide_int scale = 1;
        for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
        wide_int num = static_cast<wide_int>(whole) * scale + frac;
        return from_wide(negative ? -num : num, scale);
    }
    return {parse_int(text, text)};
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
    return from_wide(-static_cast<wide_int>(num_), den_);
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (den_ == rhs.den_) {
        *this = from_wide(static_cast<wide_int>(num_) + rhs.num_, den_);
    } else {
        *this = from_wide(static_cast<wide_int>(num_) * rhs.den_ + static_cast<wide_int>(rhs.num_) * den_,
                          static_cast<wide_int>(den_) * rhs.den_);
    }
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    return *this += -rhs;
}

Rational& Rational::operator*=(const Rational& rhs) {
    *this = from_wide(static_cast<wide_int>(num_) * rhs.num_, static_cast<wide_int>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
    *this = from_wide(static_cast<wide_int>(num_) * rhs.den_, static_cast<wide_int>(den_) * rhs.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const wide_int lhs = static_cast<wide_int>(a.num_) * b.den_;
    const wide_int rhs = static_cast<wide_int>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace netform
