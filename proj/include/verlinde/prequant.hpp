#pragma once

// Input data of the moduli problem, the finite 2-group Gamma of central sign
// vectors, level-k pre-quantization conditions and the phase factors that a
// choice of pre-quantization induces on the fixed point data.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "verlinde/fusion_ring.hpp"

namespace verlinde {

/// Default upper bound on |Gamma| for enumeration.
inline constexpr std::size_t kDefaultGammaCap = std::size_t{1} << 20;

/// Genus h and boundary labels m_1 ... m_s at level k. Label m stands for the
/// conjugacy class of exp((m/k) rho); the trace-zero class D_* is m = k/2.
/// Slot order everywhere is: s boundary slots, then 2h double slots, the
/// i-th double occupying slots s+2i and s+2i+1.
struct SurfaceData {
  Level level{0};
  int genus = 0;
  std::vector<int> labels;

  int boundary_count() const noexcept { return static_cast<int>(labels.size()); }
  int slot_count() const noexcept { return boundary_count() + 2 * genus; }
  bool is_star(int label) const noexcept { return 2 * label == level.k(); }
  /// Number r of boundary labels equal to k/2.
  int star_count() const noexcept;
  /// Indices of the boundary slots carrying the star label, ascending.
  std::vector<int> star_slots() const;
  bool labels_in_range() const noexcept;
};

/// Element of Gamma as a bit vector over the slots; 1 encodes the central
/// element c, 0 the unit e.
struct GammaElement {
  std::vector<std::uint8_t> bits;

  /// l(gamma): number of slots equal to c.
  int weight() const noexcept;
  /// Number of slots equal to c among the first `boundary_count` slots.
  int boundary_weight(int boundary_count) const noexcept;
  bool is_identity() const noexcept { return weight() == 0; }
  /// Group product (componentwise in Z^{s+2h}).
  GammaElement operator*(const GammaElement& other) const;

  friend bool operator==(const GammaElement&, const GammaElement&) = default;
};

/// A homomorphism psi: Gamma -> {+-1}, psi(gamma) = (-1)^{<psi_bits, gamma>}.
struct PrequantChoice {
  std::vector<std::uint8_t> psi_bits;

  int operator()(const GammaElement& gamma) const;
  bool is_trivial() const noexcept;

  friend bool operator==(const PrequantChoice&, const PrequantChoice&) = default;
};

enum class Condition {
  LabelsInRange,       // (i)
  GenusNeedsEvenLevel, // (ii)
  StarsNeedLevelMod4,  // (iii)
  StarNeedsEvenLevel,  // implied by (i) for the class D_*
};

struct ConditionResult {
  Condition condition;
  bool holds = true;
  std::string description;
};

struct AdmissibilityReport {
  std::vector<ConditionResult> conditions;

  bool admissible() const noexcept;
  /// Human readable reason for the first failing condition; empty when
  /// admissible.
  std::string failure_reason() const;
};

/// Roman numeral label used when reporting a condition: "i", "ii", "iii",
/// or "implied".
std::string condition_label(Condition c);

AdmissibilityReport check_prequantization(const SurfaceData& surface);
/// Throws NotAdmissible carrying the failure reason.
void require_admissible(const SurfaceData& surface);

/// |Gamma| = 2^{2h+r-1} for r >= 1, 2^{2h} for r = 0.
std::size_t gamma_order(const SurfaceData& surface);

/// All of Gamma; the identity comes first. Throws GroupTooLarge above `cap`.
std::vector<GammaElement> enumerate_gamma(const SurfaceData& surface,
                                          std::size_t cap = kDefaultGammaCap);

/// Canonical representative: non-star boundary bits cleared and the star
/// bits normalised so that the last star bit is 0.
PrequantChoice canonicalize(const SurfaceData& surface, PrequantChoice choice);
bool is_canonical(const SurfaceData& surface, const PrequantChoice& choice);

/// One canonical representative per element of Hom(Gamma, {+-1}); the
/// trivial choice comes first. Throws NotAdmissible or GroupTooLarge.
std::vector<PrequantChoice> enumerate_choices(const SurfaceData& surface,
                                              std::size_t cap = kDefaultGammaCap);

/// phi'(gamma) for the given pre-quantization: psi(gamma) times a sign from
/// the star block and one from every double whose pair of slots is not
/// (e,e). Returns +1 or -1.
int phase_factor(const SurfaceData& surface, const PrequantChoice& choice,
                 const GammaElement& gamma);

/// psi restricted to the star slots, in star-slot order.
std::vector<std::uint8_t> star_restriction(const SurfaceData& surface,
                                           const PrequantChoice& choice);
/// The two psi bits of the i-th double.
std::vector<std::uint8_t> double_restriction(const SurfaceData& surface,
                                             const PrequantChoice& choice, int index);

}  // namespace verlinde
