#include "verlinde/prequant.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace verlinde {

namespace {

void require_length(const SurfaceData& surface, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(surface.slot_count())) {
    std::ostringstream os;
    os << what << " has " << n << " bits, surface has " << surface.slot_count() << " slots";
    throw std::invalid_argument(os.str());
  }
}

// Bit positions that are free in Gamma: the first r-1 star slots (the last
// one is fixed by parity) and every double slot.
std::vector<int> free_positions(const SurfaceData& surface) {
  std::vector<int> free;
  const auto stars = surface.star_slots();
  if (!stars.empty()) free.assign(stars.begin(), stars.end() - 1);
  for (int j = surface.boundary_count(); j < surface.slot_count(); ++j) free.push_back(j);
  return free;
}

void require_cap(std::size_t free_bits, std::size_t cap) {
  if (free_bits >= 63 || (std::size_t{1} << free_bits) > cap) {
    std::ostringstream os;
    os << "|Gamma| = 2^" << free_bits << " exceeds the cap of " << cap << " elements";
    throw GroupTooLarge(os.str());
  }
}

}  // namespace

int SurfaceData::star_count() const noexcept {
  return static_cast<int>(std::count_if(labels.begin(), labels.end(),
                                        [this](int m) { return is_star(m); }));
}

std::vector<int> SurfaceData::star_slots() const {
  std::vector<int> out;
  for (int j = 0; j < boundary_count(); ++j)
    if (is_star(labels[static_cast<std::size_t>(j)])) out.push_back(j);
  return out;
}

bool SurfaceData::labels_in_range() const noexcept {
  return std::all_of(labels.begin(), labels.end(),
                     [this](int m) { return m >= 0 && m <= level.k(); });
}

int GammaElement::weight() const noexcept {
  return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

int GammaElement::boundary_weight(int boundary_count) const noexcept {
  const auto n = std::min<std::size_t>(bits.size(), static_cast<std::size_t>(boundary_count));
  return static_cast<int>(std::count(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n),
                                     std::uint8_t{1}));
}

GammaElement GammaElement::operator*(const GammaElement& other) const {
  if (bits.size() != other.bits.size()) throw std::invalid_argument("gamma length mismatch");
  GammaElement out{bits};
  for (std::size_t i = 0; i < bits.size(); ++i) out.bits[i] ^= other.bits[i];
  return out;
}

int PrequantChoice::operator()(const GammaElement& gamma) const {
  if (psi_bits.size() != gamma.bits.size()) throw std::invalid_argument("psi/gamma length mismatch");
  unsigned parity = 0;
  for (std::size_t i = 0; i < psi_bits.size(); ++i) parity ^= (psi_bits[i] & gamma.bits[i]);
  return parity ? -1 : 1;
}

bool PrequantChoice::is_trivial() const noexcept {
  return std::all_of(psi_bits.begin(), psi_bits.end(), [](std::uint8_t b) { return b == 0; });
}

std::string condition_label(Condition c) {
  switch (c) {
    case Condition::LabelsInRange: return "i";
    case Condition::GenusNeedsEvenLevel: return "ii";
    case Condition::StarsNeedLevelMod4: return "iii";
    case Condition::StarNeedsEvenLevel: return "implied";
  }
  return "?";
}

bool AdmissibilityReport::admissible() const noexcept {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.holds; });
}

std::string AdmissibilityReport::failure_reason() const {
  for (const auto& c : conditions) {
    if (c.holds) continue;
    if (c.condition == Condition::StarNeedsEvenLevel) return "implied condition: " + c.description;
    return "condition (" + condition_label(c.condition) + ") " + c.description;
  }
  return {};
}

AdmissibilityReport check_prequantization(const SurfaceData& surface) {
  const int k = surface.level.k();
  const int r = surface.star_count();
  AdmissibilityReport report;
  report.conditions.push_back({Condition::LabelsInRange, surface.labels_in_range(),
                               "requires every label m_j ∈ {0,…,k}"});
  report.conditions.push_back({Condition::GenusNeedsEvenLevel, surface.genus == 0 || k % 2 == 0,
                               "requires k ∈ 2N when h ≥ 1"});
  report.conditions.push_back({Condition::StarsNeedLevelMod4, r < 3 || k % 4 == 0,
                               "requires k ∈ 4N"});
  // A star label exists only for even k, so this never fails; it is kept in
  // the report because it is part of the stated condition list.
  report.conditions.push_back({Condition::StarNeedsEvenLevel, r == 0 || k % 2 == 0,
                               "requires k ∈ 2N when r ≥ 1"});
  return report;
}

void require_admissible(const SurfaceData& surface) {
  const auto report = check_prequantization(surface);
  if (!report.admissible()) throw NotAdmissible("inadmissible: " + report.failure_reason());
}

std::size_t gamma_order(const SurfaceData& surface) {
  const std::size_t free_bits = free_positions(surface).size();
  if (free_bits >= 63) return 0;
  return std::size_t{1} << free_bits;
}

std::vector<GammaElement> enumerate_gamma(const SurfaceData& surface, std::size_t cap) {
  const auto free = free_positions(surface);
  require_cap(free.size(), cap);
  const auto stars = surface.star_slots();
  const std::size_t n = std::size_t{1} << free.size();

  std::vector<GammaElement> out;
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    GammaElement g{std::vector<std::uint8_t>(static_cast<std::size_t>(surface.slot_count()), 0)};
    unsigned star_parity = 0;
    for (std::size_t b = 0; b < free.size(); ++b) {
      const std::uint8_t bit = (mask >> b) & 1U;
      g.bits[static_cast<std::size_t>(free[b])] = bit;
      if (free[b] < surface.boundary_count()) star_parity ^= bit;
    }
    if (!stars.empty()) g.bits[static_cast<std::size_t>(stars.back())] = static_cast<std::uint8_t>(star_parity);
    out.push_back(std::move(g));
  }
  return out;
}

PrequantChoice canonicalize(const SurfaceData& surface, PrequantChoice choice) {
  require_length(surface, choice.psi_bits.size(), "psi");
  for (auto& b : choice.psi_bits) b &= 1U;
  for (int j = 0; j < surface.boundary_count(); ++j)
    if (!surface.is_star(surface.labels[static_cast<std::size_t>(j)]))
      choice.psi_bits[static_cast<std::size_t>(j)] = 0;
  // The all-ones vector on the star slots annihilates Gamma.
  const auto stars = surface.star_slots();
  if (!stars.empty() && choice.psi_bits[static_cast<std::size_t>(stars.back())] == 1)
    for (int j : stars) choice.psi_bits[static_cast<std::size_t>(j)] ^= 1U;
  return choice;
}

bool is_canonical(const SurfaceData& surface, const PrequantChoice& choice) {
  return canonicalize(surface, choice) == choice;
}

std::vector<PrequantChoice> enumerate_choices(const SurfaceData& surface, std::size_t cap) {
  require_admissible(surface);
  const auto free = free_positions(surface);
  require_cap(free.size(), cap);
  const std::size_t n = std::size_t{1} << free.size();
  std::vector<PrequantChoice> out;
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    PrequantChoice c{std::vector<std::uint8_t>(static_cast<std::size_t>(surface.slot_count()), 0)};
    for (std::size_t b = 0; b < free.size(); ++b)
      c.psi_bits[static_cast<std::size_t>(free[b])] = (mask >> b) & 1U;
    out.push_back(std::move(c));
  }
  return out;
}

int phase_factor(const SurfaceData& surface, const PrequantChoice& choice, const GammaElement& gamma) {
  require_length(surface, choice.psi_bits.size(), "psi");
  require_length(surface, gamma.bits.size(), "gamma");
  if (gamma.is_identity()) return 1;

  const int k = surface.level.k();
  int sign = choice(gamma);

  // Star block: (-1)^{k l_star / 8} for r >= 3. For r = 2 the two
  // pre-quantizations are labelled directly by the weight on (c, c).
  const int l_star = gamma.boundary_weight(surface.boundary_count());
  if (surface.star_count() >= 3 && l_star > 0) {
    if ((k * l_star) % 8 != 0) {
      std::ostringstream os;
      os << "phase exponent k*l(gamma)/8 = " << k << "*" << l_star << "/8 is not an integer";
      throw std::domain_error(os.str());
    }
    if (((k * l_star) / 8) % 2 != 0) sign = -sign;
  }

  for (int i = 0; i < surface.genus; ++i) {
    const auto a = static_cast<std::size_t>(surface.boundary_count() + 2 * i);
    if (gamma.bits[a] == 0 && gamma.bits[a + 1] == 0) continue;
    if (k % 2 != 0) throw std::domain_error("double phase (-1)^{k/2} needs even k");
    if ((k / 2) % 2 != 0) sign = -sign;
  }
  return sign;
}

std::vector<std::uint8_t> star_restriction(const SurfaceData& surface, const PrequantChoice& choice) {
  require_length(surface, choice.psi_bits.size(), "psi");
  std::vector<std::uint8_t> out;
  for (int j : surface.star_slots()) out.push_back(choice.psi_bits[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<std::uint8_t> double_restriction(const SurfaceData& surface, const PrequantChoice& choice,
                                             int index) {
  require_length(surface, choice.psi_bits.size(), "psi");
  if (index < 0 || index >= surface.genus) throw IndexOutOfRange("double index out of range");
  const auto a = static_cast<std::size_t>(surface.boundary_count() + 2 * index);
  return {choice.psi_bits[a], choice.psi_bits[a + 1]};
}

}  // namespace verlinde
