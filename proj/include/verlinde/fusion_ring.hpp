#pragma once

// Exact arithmetic in the representation ring R(SU(2)) and in the level-k
// fusion ring R_k(SU(2)), plus the floating-point bridge to the idempotent
// basis (S-matrix, evaluation at the special points t_l).

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verlinde/errors.hpp"

namespace verlinde {

using Integer = boost::multiprecision::cpp_int;

/// Absolute tolerance used when rounding floating-point basis changes back
/// to integers.
inline constexpr double kDefaultTolerance = 1e-6;

class Level {
 public:
  explicit Level(int k);

  int k() const noexcept { return k_; }
  /// Number of basis elements tau_0 ... tau_k.
  int rank() const noexcept { return k_ + 1; }
  bool even() const noexcept { return k_ % 2 == 0; }
  /// k/2; only meaningful for even levels.
  int half() const noexcept { return k_ / 2; }

  friend bool operator==(Level, Level) = default;

 private:
  int k_;
};

/// Finitely supported integer combination of SU(2) characters chi_m.
/// Zero coefficients are never stored.
class CharacterPoly {
 public:
  CharacterPoly() = default;

  static CharacterPoly character(int degree);

  void add(int degree, const Integer& coefficient);
  Integer coefficient(int degree) const;
  const std::map<int, Integer>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  friend bool operator==(const CharacterPoly&, const CharacterPoly&) = default;

 private:
  std::map<int, Integer> terms_;
};

/// Element of R_k(SU(2)) in the tau basis. The coefficient vector is dense,
/// always of length k+1.
class FusionElement {
 public:
  explicit FusionElement(Level level);
  FusionElement(Level level, std::vector<Integer> coeffs);

  static FusionElement zero(Level level) { return FusionElement(level); }
  static FusionElement unit(Level level) { return basis(level, 0); }
  static FusionElement basis(Level level, int m);
  static FusionElement from_ints(Level level, std::span<const long long> coeffs);

  Level level() const noexcept { return level_; }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  const Integer& operator[](std::size_t m) const { return coeffs_.at(m); }
  bool is_zero() const;

  FusionElement& operator+=(const FusionElement& other);
  FusionElement& operator-=(const FusionElement& other);
  FusionElement& operator*=(const Integer& scalar);

  friend FusionElement operator+(FusionElement a, const FusionElement& b) { return a += b; }
  friend FusionElement operator-(FusionElement a, const FusionElement& b) { return a -= b; }
  friend FusionElement operator*(FusionElement a, const Integer& s) { return a *= s; }
  friend FusionElement operator*(const Integer& s, FusionElement a) { return a *= s; }
  friend FusionElement operator*(const FusionElement& a, const FusionElement& b);

  /// Divides every coefficient by `divisor`. Throws InexactDivision unless
  /// every coefficient is a multiple of it.
  FusionElement divided_exactly(const Integer& divisor) const;

  friend bool operator==(const FusionElement&, const FusionElement&) = default;

  /// Human readable form, e.g. "tau_0 + 3 tau_2 - tau_4".
  std::string to_string() const;

 private:
  void require_same_level(const FusionElement& other) const;

  Level level_;
  std::vector<Integer> coeffs_;
};

/// Values of an element at the special points t_0 ... t_k, i.e. its
/// coordinates in the idempotent basis.
struct IdempotentVector {
  Level level;
  std::vector<double> values;
};

/// Image of a character polynomial under R(SU(2)) -> R_k(SU(2)), computed
/// by affine Weyl folding of each degree.
FusionElement reduce_character(Level level, const CharacterPoly& poly);

/// Exact product in R_k(SU(2)): Clebsch-Gordan series followed by folding.
FusionElement multiply(const FusionElement& a, const FusionElement& b);
FusionElement power(const FusionElement& base, int exponent);

/// sin(pi * numerator / denominator) with exact zeros and argument reduction
/// in integers.
double sin_pi_ratio(long long numerator, long long denominator);

/// Kac-Peterson S-matrix entry.
double s_matrix_entry(Level level, int m, int l);
std::vector<std::vector<double>> s_matrix(Level level);

/// tau_m(t_l) for a single basis element.
double basis_value(Level level, int m, int l);
double evaluate_at_special_point(const FusionElement& a, int l);

IdempotentVector to_idempotent(const FusionElement& a);
/// Rounds each reconstructed tau coefficient to the nearest integer; throws
/// NonIntegralCoefficient when a coefficient is further than `tolerance`
/// from an integer.
FusionElement from_idempotent(const IdempotentVector& v, double tolerance = kDefaultTolerance);

/// The idempotent element with tau-coefficients S_{0,l} S_{m,l}, as floats.
std::vector<double> idempotent_tau_coefficients(Level level, int l);

/// Coefficient of tau_0 (the SU(2)-invariant part).
Integer trace(const FusionElement& a);

/// Nearest integer to `value`, or nullopt when |value - round(value)| exceeds
/// `tolerance`.
std::optional<Integer> nearest_integer(double value, double tolerance);

}  // namespace verlinde
