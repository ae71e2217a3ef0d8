#include "verlinde/quant.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "verlinde/detail/compensated_sum.hpp"

namespace verlinde {

namespace {

void require_star_admissible(Level level, int r) {
  if (r < 0) throw std::invalid_argument("star count must be non-negative");
  const int k = level.k();
  if (r >= 1 && k % 2 != 0) {
    std::ostringstream os;
    os << "inadmissible: " << r << " star factor(s) need k ∈ 2N, got k = " << k;
    throw NotAdmissible(os.str());
  }
  if (r >= 3 && k % 4 != 0) {
    std::ostringstream os;
    os << "inadmissible: condition (iii) requires k ∈ 4N for r = " << r << ", got k = " << k;
    throw NotAdmissible(os.str());
  }
}

void require_star_psi(int r, std::span<const std::uint8_t> star_psi) {
  if (r >= 2 && star_psi.size() != static_cast<std::size_t>(r)) {
    std::ostringstream os;
    os << "star block with r = " << r << " needs " << r << " psi bits, got " << star_psi.size();
    throw std::invalid_argument(os.str());
  }
}

// psi(gamma) for gamma given as a bit mask over the r star slots.
int star_psi_sign(std::span<const std::uint8_t> star_psi, unsigned mask) {
  unsigned parity = 0;
  for (std::size_t i = 0; i < star_psi.size(); ++i)
    if ((mask >> i) & 1U) parity ^= star_psi[i] & 1U;
  return parity ? -1 : 1;
}

Integer integer_power(long long base, int exponent) {
  Integer out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

std::string to_string(QuantPath path) {
  switch (path) {
    case QuantPath::ClosedForm: return "closed_form";
    case QuantPath::FsFloat: return "fs_float";
    case QuantPath::Localization: return "localization";
  }
  return "unknown";
}

QuantPath parse_quant_path(const std::string& name) {
  if (name == "closed_form") return QuantPath::ClosedForm;
  if (name == "fs_float") return QuantPath::FsFloat;
  if (name == "localization") return QuantPath::Localization;
  throw std::invalid_argument("unknown quantization path '" + name + "'");
}

FusionElement chi_element(Level level) {
  if (!level.even()) throw std::invalid_argument("chi is defined for even levels only");
  FusionElement chi(level);
  std::vector<Integer> c(static_cast<std::size_t>(level.rank()));
  for (int j = 0; 2 * j <= level.k(); ++j) c[static_cast<std::size_t>(2 * j)] = (j % 2 == 0) ? 1 : -1;
  return FusionElement(level, std::move(c));
}

int star_fixed_point_weight(Level level, int r, std::span<const std::uint8_t> star_psi,
                            std::span<const std::uint8_t> gamma_bits) {
  require_star_psi(r, star_psi);
  if (gamma_bits.size() != static_cast<std::size_t>(r))
    throw std::invalid_argument("gamma bits must cover the star slots");
  unsigned mask = 0;
  int l = 0;
  for (std::size_t i = 0; i < gamma_bits.size(); ++i) {
    if (gamma_bits[i] & 1U) {
      mask |= 1U << i;
      ++l;
    }
  }
  if (l % 2 != 0) throw std::invalid_argument("gamma must have an even number of c entries");
  const int psi = star_psi_sign(star_psi, mask);
  if (r <= 2) return psi;
  require_star_admissible(level, r);
  const int exponent = (level.k() / 4) * (r - l / 2);
  return (exponent % 2 == 0) ? psi : -psi;
}

FusionElement quantize_star_block(Level level, int r, std::span<const std::uint8_t> star_psi) {
  require_star_admissible(level, r);
  if (r == 0) return FusionElement::unit(level);
  const FusionElement tau_half = FusionElement::basis(level, level.half());
  if (r == 1) return tau_half;
  require_star_psi(r, star_psi);

  const FusionElement chi = chi_element(level);
  const FusionElement top = power(tau_half, r);
  if (r == 2) {
    const int sign = star_psi_sign(star_psi, 0b11U);
    return (top + chi * Integer(sign)).divided_exactly(2);
  }

  const int k = level.k();
  const long long dim = k / 2 + 1;
  if (r > 30) throw std::invalid_argument("star count too large for enumeration");
  Integer weight_sum = 0;
  for (unsigned mask = 1; mask < (1U << r); ++mask) {
    const int l = std::popcount(mask);
    if (l % 2 != 0) continue;
    const int psi = star_psi_sign(star_psi, mask);
    const int sign_exponent = (k / 4) * (r - l / 2);
    Integer term = integer_power(dim, l / 2 - 1);
    if ((sign_exponent % 2 != 0) != (psi < 0)) term = -term;
    weight_sum += term;
  }
  return (top + chi * weight_sum).divided_exactly(Integer(1) << (r - 1));
}

FusionElement quantize_conjugacy_class(Level level, int label) {
  return FusionElement::basis(level, label);
}

FusionElement quantize_double_su2(Level level) {
  FusionElement sum(level);
  for (int m = 0; m <= level.k(); ++m) {
    const auto tau = FusionElement::basis(level, m);
    sum += multiply(tau, tau);
  }
  return sum;
}

FusionElement quantize_double_so3(Level level, std::span<const std::uint8_t> phi_bits) {
  if (!level.even()) {
    std::ostringstream os;
    os << "inadmissible: the SO(3) double needs k ∈ 2N, got k = " << level.k();
    throw NotAdmissible(os.str());
  }
  if (phi_bits.size() != 2) throw std::invalid_argument("double twist needs exactly two bits");
  const int a = phi_bits[0] & 1U;
  const int b = phi_bits[1] & 1U;
  // phi(c,e) + phi(e,c) + phi(c,c)
  const int phi_sum = (a ? -1 : 1) + (b ? -1 : 1) + ((a ^ b) ? -1 : 1);
  const int sign = (level.half() % 2 == 0) ? 1 : -1;
  return (quantize_double_su2(level) + chi_element(level) * Integer(sign * phi_sum)).divided_exactly(4);
}

QuantizationResult quantize_surface(const SurfaceData& surface, const PrequantChoice& choice) {
  require_admissible(surface);
  const PrequantChoice canonical = canonicalize(surface, choice);
  const Level level = surface.level;

  const auto star_psi = star_restriction(surface, canonical);
  FusionElement q = quantize_star_block(level, surface.star_count(), star_psi);
  for (int m : surface.labels)
    if (!surface.is_star(m)) q = multiply(q, quantize_conjugacy_class(level, m));
  for (int i = 0; i < surface.genus; ++i)
    q = multiply(q, quantize_double_so3(level, double_restriction(surface, canonical, i)));

  Integer reduced = trace(q);
  return {std::move(q), std::move(reduced), QuantPath::ClosedForm, canonical};
}

namespace {

struct SumTerms {
  std::vector<std::vector<double>> s;
  int half = -1;
};

// prod_j S^{(gamma_j)}_{m_j,l} / S_{0,l}^{denominator_power}
double fs_term(const SurfaceData& surface, const SumTerms& t, const GammaElement& gamma, int l,
               int denominator_power) {
  const auto li = static_cast<std::size_t>(l);
  double numerator = 1.0;
  for (int j = 0; j < surface.boundary_count(); ++j) {
    if (gamma.bits[static_cast<std::size_t>(j)]) continue;  // S^{(c)} = 1
    numerator *= t.s[static_cast<std::size_t>(surface.labels[static_cast<std::size_t>(j)])][li];
  }
  return numerator * std::pow(t.s[0][li], -denominator_power);
}

SumTerms prepare(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                 std::span<const int> phases) {
  if (gammas.size() != phases.size()) throw std::invalid_argument("one phase per group element required");
  if (gammas.empty()) throw std::invalid_argument("empty group");
  if (!surface.labels_in_range()) throw IndexOutOfRange("label out of range");
  for (const auto& g : gammas)
    if (g.bits.size() != static_cast<std::size_t>(surface.slot_count()))
      throw std::invalid_argument("gamma length does not match surface");
  SumTerms t{s_matrix(surface.level), surface.level.even() ? surface.level.half() : -1};
  return t;
}

}  // namespace

IdempotentVector fs_idempotent(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                               std::span<const int> phases) {
  const SumTerms t = prepare(surface, gammas, phases);
  const Level level = surface.level;
  const int power = surface.slot_count();
  std::vector<detail::CompensatedSum> sums(static_cast<std::size_t>(level.rank()));
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const GammaElement& gamma = gammas[g];
    const double phase = phases[g];
    if (gamma.is_identity()) {
      for (int l = 0; l <= level.k(); ++l)
        sums[static_cast<std::size_t>(l)] += phase * fs_term(surface, t, gamma, l, power);
    } else {
      if (t.half < 0) throw std::domain_error("non-trivial gamma at odd level");
      sums[static_cast<std::size_t>(t.half)] += phase * fs_term(surface, t, gamma, t.half, power);
    }
  }
  IdempotentVector v{level, {}};
  const double order = static_cast<double>(gammas.size());
  for (const auto& s : sums) v.values.push_back(s.value() / order);
  return v;
}

QuantizationResult fs_formula_with_phases(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                                          std::span<const int> phases, double tolerance) {
  FusionElement element = from_idempotent(fs_idempotent(surface, gammas, phases), tolerance);
  Integer reduced = trace(element);
  return {std::move(element), std::move(reduced), QuantPath::FsFloat, std::nullopt};
}

namespace {

std::vector<int> phases_for(const SurfaceData& surface, const PrequantChoice& choice,
                            const std::vector<GammaElement>& gammas) {
  std::vector<int> phases;
  phases.reserve(gammas.size());
  for (const auto& g : gammas) phases.push_back(phase_factor(surface, choice, g));
  return phases;
}

}  // namespace

QuantizationResult fs_formula(const SurfaceData& surface, const PrequantChoice& choice, double tolerance) {
  require_admissible(surface);
  const PrequantChoice canonical = canonicalize(surface, choice);
  const auto gammas = enumerate_gamma(surface);
  const auto phases = phases_for(surface, canonical, gammas);
  auto result = fs_formula_with_phases(surface, gammas, phases, tolerance);
  result.choice = canonical;
  return result;
}

double reduced_quantization_value(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                                  std::span<const int> phases) {
  const SumTerms t = prepare(surface, gammas, phases);
  const int power = surface.slot_count() - 2;
  detail::CompensatedSum sum;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const GammaElement& gamma = gammas[g];
    const double phase = phases[g];
    if (gamma.is_identity()) {
      for (int l = 0; l <= surface.level.k(); ++l) sum += phase * fs_term(surface, t, gamma, l, power);
    } else {
      if (t.half < 0) throw std::domain_error("non-trivial gamma at odd level");
      sum += phase * fs_term(surface, t, gamma, t.half, power);
    }
  }
  return sum.value() / static_cast<double>(gammas.size());
}

Integer reduced_quantization(const SurfaceData& surface, const PrequantChoice& choice, double tolerance) {
  require_admissible(surface);
  const PrequantChoice canonical = canonicalize(surface, choice);
  const auto gammas = enumerate_gamma(surface);
  const auto phases = phases_for(surface, canonical, gammas);
  const double value = reduced_quantization_value(surface, gammas, phases);
  auto rounded = nearest_integer(value, tolerance);
  if (!rounded) {
    std::ostringstream os;
    os.precision(17);
    os << "reduced quantization " << value << " is not within " << tolerance << " of an integer";
    throw NonIntegralValue(os.str());
  }
  return *rounded;
}

QuantizationResult verlinde_baseline(const SurfaceData& surface) {
  if (!surface.labels_in_range()) throw IndexOutOfRange("label out of range");
  if (surface.genus < 0) throw std::invalid_argument("genus must be non-negative");
  const Level level = surface.level;
  FusionElement q = FusionElement::unit(level);
  for (int m : surface.labels) q = multiply(q, quantize_conjugacy_class(level, m));
  if (surface.genus > 0) q = multiply(q, power(quantize_double_su2(level), surface.genus));
  Integer reduced = trace(q);
  return {std::move(q), std::move(reduced), QuantPath::ClosedForm, std::nullopt};
}

double localization_evaluate(Level level, int r, std::span<const std::uint8_t> star_psi, int l) {
  require_star_admissible(level, r);
  if (l < 0 || l > level.k()) throw IndexOutOfRange("special point index out of range");
  if (r == 0) return 1.0;
  const int half = level.half();
  const double tau_half = basis_value(level, half, l);  // Q(D_*)(t_l)
  if (r == 1) return tau_half;
  require_star_psi(r, star_psi);

  const double scale = std::ldexp(1.0, 1 - r);
  // F^{(eps)}: 2^r isolated points in the cover, 2 in M.
  double value = scale * std::pow(tau_half, r);
  if (l != half) return value;

  // t_l = t_*: every gamma contributes its torus F^{(gamma)}.
  const double dim = half + 1.0;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(r));
  detail::CompensatedSum tori;
  for (unsigned mask = 1; mask < (1U << r); ++mask) {
    const int weight = std::popcount(mask);
    if (weight % 2 != 0) continue;
    for (int i = 0; i < r; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    const int phase = star_fixed_point_weight(level, r, star_psi, bits);
    tori += scale * std::pow(dim, weight / 2) * phase;
  }
  return value + tori.value();
}

}  // namespace verlinde
