#include "regrepair/decimal.hpp"

#include "regrepair/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace regrepair {

namespace {

constexpr int kFractionDigits = 12;
constexpr std::int64_t kScale = 1'000'000'000'000;  // 10^12

}  // namespace

Decimal Decimal::parse(std::string_view text) {
    if (text.empty()) raise(Errc::InvalidArgument, "empty decimal literal");
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    std::int64_t whole = 0;
    bool any_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = whole * 10 + (text[pos] - '0');
        any_digit = true;
        ++pos;
    }
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (frac_digits == kFractionDigits)
                raise(Errc::InvalidArgument,
                      "too many fractional digits in decimal literal '" + std::string(text) + "'");
            frac = frac * 10 + (text[pos] - '0');
            ++frac_digits;
            any_digit = true;
            ++pos;
        }
    }
    if (!any_digit || pos != text.size())
        raise(Errc::InvalidArgument, "malformed decimal literal '" + std::string(text) + "'");
    for (int i = frac_digits; i < kFractionDigits; ++i) frac *= 10;
    std::int64_t pico = whole * kScale + frac;
    return Decimal(negative ? -pico : pico);
}

Decimal Decimal::scaled_by(std::int64_t factor) const {
    return Decimal(pico_ * factor);
}

std::string Decimal::to_string() const {
    std::int64_t value = pico_;
    std::string sign;
    if (value < 0) {
        sign = "-";
        value = -value;
    }
    std::int64_t whole = value / kScale;
    std::int64_t frac = value % kScale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
        std::string digits(kFractionDigits, '0');
        for (int i = kFractionDigits - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + frac % 10);
            frac /= 10;
        }
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

}  // namespace regrepair
