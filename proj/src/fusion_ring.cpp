#include "verlinde/fusion_ring.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "verlinde/detail/compensated_sum.hpp"

namespace verlinde {

namespace {

struct Folded {
  int index = 0;  // target tau index
  int sign = 0;   // 0 when chi_m lies in the ideal
};

// chi_m -> +-tau_j or 0, reflecting m+1 through the affine Weyl group of
// level k (period 2(k+2), reflection walls at 0 and k+2).
Folded fold_degree(int k, long long m) {
  const long long period = 2LL * (k + 2);
  const long long a = (m + 1) % period;
  if (a == 0 || a == k + 2) return {};
  if (a <= k + 1) return {static_cast<int>(a - 1), +1};
  return {static_cast<int>(period - a - 1), -1};
}

void require_index(Level level, int i, const char* what) {
  if (i < 0 || i > level.k()) {
    std::ostringstream os;
    os << what << " index " << i << " out of range [0, " << level.k() << "]";
    throw IndexOutOfRange(os.str());
  }
}

}  // namespace

Level::Level(int k) : k_(k) {
  if (k < 0) throw std::invalid_argument("level must be non-negative");
}

CharacterPoly CharacterPoly::character(int degree) {
  CharacterPoly p;
  p.add(degree, 1);
  return p;
}

void CharacterPoly::add(int degree, const Integer& coefficient) {
  if (degree < 0) throw std::invalid_argument("character degree must be non-negative");
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(degree, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

Integer CharacterPoly::coefficient(int degree) const {
  auto it = terms_.find(degree);
  return it == terms_.end() ? Integer(0) : it->second;
}

FusionElement::FusionElement(Level level)
    : level_(level), coeffs_(static_cast<std::size_t>(level.rank())) {}

FusionElement::FusionElement(Level level, std::vector<Integer> coeffs)
    : level_(level), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(level.rank())) {
    std::ostringstream os;
    os << "fusion element at level " << level.k() << " needs " << level.rank()
       << " coefficients, got " << coeffs_.size();
    throw std::invalid_argument(os.str());
  }
}

FusionElement FusionElement::basis(Level level, int m) {
  require_index(level, m, "basis");
  FusionElement e(level);
  e.coeffs_[static_cast<std::size_t>(m)] = 1;
  return e;
}

FusionElement FusionElement::from_ints(Level level, std::span<const long long> coeffs) {
  std::vector<Integer> c(coeffs.begin(), coeffs.end());
  return FusionElement(level, std::move(c));
}

bool FusionElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

void FusionElement::require_same_level(const FusionElement& other) const {
  if (level_ != other.level_) {
    std::ostringstream os;
    os << "level mismatch: " << level_.k() << " vs " << other.level_.k();
    throw LevelMismatch(os.str());
  }
}

FusionElement& FusionElement::operator+=(const FusionElement& other) {
  require_same_level(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FusionElement& FusionElement::operator-=(const FusionElement& other) {
  require_same_level(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

FusionElement& FusionElement::operator*=(const Integer& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

FusionElement operator*(const FusionElement& a, const FusionElement& b) { return multiply(a, b); }

FusionElement FusionElement::divided_exactly(const Integer& divisor) const {
  if (divisor == 0) throw InexactDivision("division by zero");
  FusionElement out(level_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Integer q, r;
    boost::multiprecision::divide_qr(coeffs_[i], divisor, q, r);
    if (r != 0) {
      std::ostringstream os;
      os << "coefficient " << coeffs_[i] << " of tau_" << i << " is not divisible by " << divisor;
      throw InexactDivision(os.str());
    }
    out.coeffs_[i] = std::move(q);
  }
  return out;
}

std::string FusionElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Integer& c = coeffs_[i];
    if (c == 0) continue;
    const Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag << " ";
    os << "tau_" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

FusionElement reduce_character(Level level, const CharacterPoly& poly) {
  FusionElement out(level);
  std::vector<Integer> acc(static_cast<std::size_t>(level.rank()));
  for (const auto& [degree, coefficient] : poly.terms()) {
    const Folded f = fold_degree(level.k(), degree);
    if (f.sign > 0) {
      acc[static_cast<std::size_t>(f.index)] += coefficient;
    } else if (f.sign < 0) {
      acc[static_cast<std::size_t>(f.index)] -= coefficient;
    }
  }
  return FusionElement(level, std::move(acc));
}

FusionElement multiply(const FusionElement& a, const FusionElement& b) {
  if (a.level() != b.level()) {
    std::ostringstream os;
    os << "level mismatch: " << a.level().k() << " vs " << b.level().k();
    throw LevelMismatch(os.str());
  }
  const Level level = a.level();
  const int k = level.k();

  // Fold table for chi_0 ... chi_{2k}.
  std::vector<Folded> folds(static_cast<std::size_t>(2 * k + 1));
  for (int m = 0; m <= 2 * k; ++m) folds[static_cast<std::size_t>(m)] = fold_degree(k, m);

  std::vector<Integer> acc(static_cast<std::size_t>(level.rank()));
  Integer product;
  for (int i = 0; i <= k; ++i) {
    const Integer& ai = a.coeffs()[static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    for (int j = 0; j <= k; ++j) {
      const Integer& bj = b.coeffs()[static_cast<std::size_t>(j)];
      if (bj == 0) continue;
      product = ai * bj;
      // chi_i chi_j = chi_{i+j} + chi_{i+j-2} + ... + chi_{|i-j|}
      for (int m = std::abs(i - j); m <= i + j; m += 2) {
        const Folded& f = folds[static_cast<std::size_t>(m)];
        if (f.sign > 0) {
          acc[static_cast<std::size_t>(f.index)] += product;
        } else if (f.sign < 0) {
          acc[static_cast<std::size_t>(f.index)] -= product;
        }
      }
    }
  }
  return FusionElement(level, std::move(acc));
}

FusionElement power(const FusionElement& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  FusionElement result = FusionElement::unit(base.level());
  FusionElement square = base;
  while (exponent > 0) {
    if (exponent & 1) result = multiply(result, square);
    exponent >>= 1;
    if (exponent > 0) square = multiply(square, square);
  }
  return result;
}

double sin_pi_ratio(long long numerator, long long denominator) {
  if (denominator <= 0) throw std::invalid_argument("denominator must be positive");
  const long long period = 2 * denominator;
  long long n = numerator % period;
  if (n < 0) n += period;
  double sign = 1.0;
  if (n >= denominator) {
    n -= denominator;
    sign = -1.0;
  }
  if (n == 0) return 0.0;
  if (2 * n > denominator) n = denominator - n;
  if (2 * n == denominator) return sign;
  return sign * std::sin(std::numbers::pi * static_cast<double>(n) / static_cast<double>(denominator));
}

double s_matrix_entry(Level level, int m, int l) {
  require_index(level, m, "S-matrix row");
  require_index(level, l, "S-matrix column");
  const int k = level.k();
  const double norm = 1.0 / std::sqrt(k / 2.0 + 1.0);
  return norm * sin_pi_ratio(static_cast<long long>(l + 1) * (m + 1), k + 2);
}

std::vector<std::vector<double>> s_matrix(Level level) {
  const auto n = static_cast<std::size_t>(level.rank());
  std::vector<std::vector<double>> s(n, std::vector<double>(n));
  for (int m = 0; m <= level.k(); ++m)
    for (int l = 0; l <= level.k(); ++l)
      s[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)] = s_matrix_entry(level, m, l);
  return s;
}

double basis_value(Level level, int m, int l) {
  require_index(level, m, "basis");
  require_index(level, l, "special point");
  const int d = level.k() + 2;
  return sin_pi_ratio(static_cast<long long>(m + 1) * (l + 1), d) / sin_pi_ratio(l + 1, d);
}

double evaluate_at_special_point(const FusionElement& a, int l) {
  const Level level = a.level();
  require_index(level, l, "special point");
  detail::CompensatedSum sum;
  for (int m = 0; m <= level.k(); ++m) {
    const Integer& c = a.coeffs()[static_cast<std::size_t>(m)];
    if (c == 0) continue;
    sum += c.convert_to<double>() * basis_value(level, m, l);
  }
  return sum.value();
}

IdempotentVector to_idempotent(const FusionElement& a) {
  IdempotentVector v{a.level(), {}};
  v.values.reserve(static_cast<std::size_t>(a.level().rank()));
  for (int l = 0; l <= a.level().k(); ++l) v.values.push_back(evaluate_at_special_point(a, l));
  return v;
}

std::vector<double> idempotent_tau_coefficients(Level level, int l) {
  require_index(level, l, "idempotent");
  std::vector<double> out(static_cast<std::size_t>(level.rank()));
  const double s0 = s_matrix_entry(level, 0, l);
  for (int m = 0; m <= level.k(); ++m) out[static_cast<std::size_t>(m)] = s0 * s_matrix_entry(level, m, l);
  return out;
}

std::optional<Integer> nearest_integer(double value, double tolerance) {
  if (!std::isfinite(value)) return std::nullopt;
  const double r = std::nearbyint(value);
  if (std::fabs(value - r) > tolerance) return std::nullopt;
  return Integer(r);
}

FusionElement from_idempotent(const IdempotentVector& v, double tolerance) {
  const Level level = v.level;
  if (v.values.size() != static_cast<std::size_t>(level.rank()))
    throw std::invalid_argument("idempotent vector has wrong length");
  const auto s = s_matrix(level);
  std::vector<Integer> coeffs(static_cast<std::size_t>(level.rank()));
  for (int m = 0; m <= level.k(); ++m) {
    detail::CompensatedSum sum;
    for (int l = 0; l <= level.k(); ++l) {
      const auto li = static_cast<std::size_t>(l);
      sum += v.values[li] * s[0][li] * s[static_cast<std::size_t>(m)][li];
    }
    const double x = sum.value();
    auto rounded = nearest_integer(x, tolerance);
    if (!rounded) {
      std::ostringstream os;
      os.precision(17);
      os << "coefficient of tau_" << m << " at level " << level.k() << " is " << x
         << ", not within " << tolerance << " of an integer";
      throw NonIntegralCoefficient(os.str());
    }
    coeffs[static_cast<std::size_t>(m)] = std::move(*rounded);
  }
  return FusionElement(level, std::move(coeffs));
}

Integer trace(const FusionElement& a) { return a.coeffs().front(); }

}  // namespace verlinde
