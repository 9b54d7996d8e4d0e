#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "semiheat/errors.hpp"

namespace semiheat {

/// A positive real or +infinity, with total comparisons.
///
/// Critical exponents degenerate to infinity in low dimension (p_sg, p_S for
/// N <= 2, p_JL for N <= 10); representing that case as a dedicated variant
/// keeps regime classification exact instead of leaning on a sentinel float.
class ExtendedReal {
  public:
    ExtendedReal() : finite_(true), value_(0.0) {}
    explicit ExtendedReal(double v) : finite_(true), value_(v) {}

    static ExtendedReal infinity() {
        ExtendedReal x;
        x.finite_ = false;
        x.value_ = 0.0;
        return x;
    }

    bool is_finite() const { return finite_; }

    /// Finite value; throws for the infinite variant.
    double value() const {
        if (!finite_) throw DomainError("ExtendedReal: value() called on infinity");
        return value_;
    }

    /// Finite value, or `fallback` for the infinite variant.
    double value_or(double fallback) const { return finite_ ? value_ : fallback; }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
        if (!a.finite_ && !b.finite_) return std::partial_ordering::equivalent;
        if (!a.finite_) return std::partial_ordering::greater;
        if (!b.finite_) return std::partial_ordering::less;
        return a.value_ <=> b.value_;
    }

    // Mixed comparisons with finite doubles (infinity compares greater).
    friend bool operator<(double a, const ExtendedReal& b) { return !b.finite_ || a < b.value_; }
    friend bool operator>(double a, const ExtendedReal& b) { return b.finite_ && a > b.value_; }
    friend bool operator<=(double a, const ExtendedReal& b) { return !b.finite_ || a <= b.value_; }
    friend bool operator>=(double a, const ExtendedReal& b) { return b.finite_ && a >= b.value_; }
    friend bool operator<(const ExtendedReal& a, double b) { return a.finite_ && a.value_ < b; }
    friend bool operator>(const ExtendedReal& a, double b) { return !a.finite_ || a.value_ > b; }

    /// "inf" or the decimal value (17 significant digits).
    std::string to_string() const;

  private:
    bool finite_;
    double value_;
};

inline std::string ExtendedReal::to_string() const {
    if (!finite_) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value_);
    return buf;
}

}  // namespace semiheat
