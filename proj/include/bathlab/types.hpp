#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bathlab {

using Vec3 = std::array<double, 3>;
using Mode = std::array<int, 3>;
using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Bad user input: caught by the CLI and reported before any computation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solver trouble at run time (eigensolver failure, non-finite state, overflow).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition (mismatched grids, non-unit direction).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm_sq(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// <v> = (1 + |v|^2)^{1/2}
inline double japanese(const Vec3& v) { return std::sqrt(1.0 + norm_sq(v)); }

inline double mode_norm(const Mode& n)
{
    return std::sqrt(double(n[0]) * n[0] + double(n[1]) * n[1] + double(n[2]) * n[2]);
}

} // namespace bathlab
