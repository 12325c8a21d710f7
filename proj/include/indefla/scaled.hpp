#pragma once

// Sign / mantissa / exponent arithmetic with an unbounded binary exponent.
//
// The mode matrices and radial bases of this library contain factors like
// (r_e/r_i)^(2|m|) whose dynamic range exceeds what IEEE double can hold long
// before |m| reaches interesting truncation orders.  ScaledValue keeps the
// full exponent in a 64-bit integer and only the mantissa in double, so
// products and ratios of such factors never overflow or underflow; accuracy
// stays at ordinary double roundoff because every operation works on
// normalized mantissas in [1,2).
//
//   value = sign * mantissa * 2^exponent,  sign in {-1,0,+1}, mantissa in [1,2)
//
// Additions align exponents exactly (in 80-bit arithmetic) and flush the
// smaller operand when the exponents differ by more than 100 binary digits,
// where it could not influence the mantissa anyway.

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace indefla {

struct ScaledValue {
    int sign = 0;             // -1, 0, +1; zero iff sign == 0
    double mantissa = 1.0;    // in [1,2) whenever sign != 0
    std::int64_t exponent = 0;

    static ScaledValue zero() { return ScaledValue{}; }
    static ScaledValue one() { return ScaledValue{+1, 1.0, 0}; }
    static ScaledValue from_double(double x);

    // Plain conversion; overflows to +-inf (resp. rounds to 0) when the
    // exponent leaves double range.
    double to_double() const;

    // Conversion that clamps the exponent into double range and reports
    // whether clamping happened (used by CSV/JSON writers).
    double to_double_clamped(bool* clamped = nullptr) const;

    bool is_zero() const { return sign == 0; }

    // exponent + log2(mantissa); exact route to log-magnitudes for decay
    // fits without ever forming the (possibly non-representable) double.
    double log2_abs() const;
};

ScaledValue operator+(const ScaledValue& a, const ScaledValue& b);
ScaledValue operator-(const ScaledValue& a, const ScaledValue& b);
ScaledValue operator*(const ScaledValue& a, const ScaledValue& b);
ScaledValue operator/(const ScaledValue& a, const ScaledValue& b);
ScaledValue operator-(const ScaledValue& a);

ScaledValue abs(const ScaledValue& a);
ScaledValue sqrt(const ScaledValue& a);  // requires a >= 0

// -1 / 0 / +1 comparison of |a| vs |b|, exact in the representation.
int compare_abs(const ScaledValue& a, const ScaledValue& b);
// total order by signed value
bool operator<(const ScaledValue& a, const ScaledValue& b);
bool operator==(const ScaledValue& a, const ScaledValue& b);

// (num/den)^k for num, den > 0 and any integer k, evaluated by binary
// exponentiation on an 80-bit mantissa with integer exponent tracking;
// relative error stays within a few double ulps for |k| up to ~1e6.
ScaledValue ratio_pow(double num, double den, std::int64_t k);

// x^k by binary exponentiation (k may be negative; x nonzero for k < 0).
ScaledValue pow_int(const ScaledValue& x, std::int64_t k);

// Complex number with scaled real and imaginary parts.  Only what the 6x6
// interface solver needs: field operations, magnitude-squared, conversion.
struct ComplexScaled {
    ScaledValue re, im;

    static ComplexScaled zero() { return {}; }
    static ComplexScaled from_complex(std::complex<double> z) {
        return {ScaledValue::from_double(z.real()), ScaledValue::from_double(z.imag())};
    }
    static ComplexScaled from_scaled(const ScaledValue& v) { return {v, ScaledValue::zero()}; }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::complex<double> to_complex_clamped(bool* clamped = nullptr) const;
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    ScaledValue abs2() const { return re * re + im * im; }
};

ComplexScaled operator+(const ComplexScaled& a, const ComplexScaled& b);
ComplexScaled operator-(const ComplexScaled& a, const ComplexScaled& b);
ComplexScaled operator*(const ComplexScaled& a, const ComplexScaled& b);
ComplexScaled operator/(const ComplexScaled& a, const ComplexScaled& b);
ComplexScaled operator-(const ComplexScaled& a);
ComplexScaled operator*(const ScaledValue& a, const ComplexScaled& b);

}  // namespace indefla
