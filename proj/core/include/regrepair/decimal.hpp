#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace regrepair {

/// Fixed-point currency amount held in pico-dollars (1e-12). Monetary totals
/// must be reproducible to the cent, so no binary floating point is involved
/// anywhere in parsing, arithmetic, or formatting.
class Decimal {
  public:
    Decimal() = default;

    /// Parses "12", "0.0025", "-3.5". Up to 12 fractional digits.
    static Decimal parse(std::string_view text);
    static Decimal from_pico(std::int64_t pico) { return Decimal(pico); }
    static Decimal zero() { return Decimal(); }

    std::int64_t pico() const { return pico_; }
    bool is_zero() const { return pico_ == 0; }

    Decimal operator+(Decimal other) const { return Decimal(pico_ + other.pico_); }
    Decimal& operator+=(Decimal other) {
        pico_ += other.pico_;
        return *this;
    }
    Decimal scaled_by(std::int64_t factor) const;

    auto operator<=>(const Decimal&) const = default;

    /// "0.0125", "12", "-0.5" — trailing fractional zeros trimmed.
    std::string to_string() const;

  private:
    explicit Decimal(std::int64_t pico) : pico_(pico) {}
    std::int64_t pico_{0};
};

}  // namespace regrepair
