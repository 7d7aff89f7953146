#pragma once

// IEEE 754 binary16 helpers for the binary feature format.

#include <cmath>
#include <cstdint>

namespace mdlseg::detail {

inline bool fits_half(double value) {
    if (!std::isfinite(value)) {
        return false;
    }
    const double magnitude = std::fabs(value);
    if (magnitude == 0.0) {
        return true;
    }
    if (magnitude > 65504.0) {
        return false;
    }
    int exponent = 0;
    std::frexp(magnitude, &exponent);
    // 11 significant bits, quantum never below the smallest subnormal 2^-24.
    const int quantum = std::max(exponent - 11, -24);
    const double scaled = std::ldexp(magnitude, -quantum);
    return scaled == std::floor(scaled);
}

// Precondition: fits_half(value).
inline std::uint16_t encode_half(double value) {
    const std::uint16_t sign = std::signbit(value) ? 0x8000U : 0U;
    const double magnitude = std::fabs(value);
    if (magnitude == 0.0) {
        return sign;
    }
    if (magnitude < std::ldexp(1.0, -14)) {
        return static_cast<std::uint16_t>(sign | static_cast<std::uint16_t>(std::ldexp(magnitude, 24)));
    }
    int exponent = 0;
    const double fraction = std::frexp(magnitude, &exponent);  // [0.5, 1)
    const auto biased = static_cast<std::uint16_t>(exponent - 1 + 15);
    const auto mantissa = static_cast<std::uint16_t>(std::ldexp(fraction * 2.0 - 1.0, 10));
    return static_cast<std::uint16_t>(sign | (biased << 10) | mantissa);
}

inline double decode_half(std::uint16_t bits) {
    const bool negative = (bits & 0x8000U) != 0;
    const int biased = (bits >> 10) & 0x1F;
    const int mantissa = bits & 0x3FF;
    double magnitude = 0.0;
    if (biased == 0) {
        magnitude = std::ldexp(static_cast<double>(mantissa), -24);
    } else if (biased == 31) {
        magnitude = mantissa == 0 ? HUGE_VAL : std::nan("");
    } else {
        magnitude = std::ldexp(static_cast<double>(1024 + mantissa), biased - 25);
    }
    return negative ? -magnitude : magnitude;
}

} // namespace mdlseg::detail
