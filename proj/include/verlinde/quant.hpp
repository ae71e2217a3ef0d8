#pragma once

// Quantization Q(M) in R_k(SU(2)) of M = (D_1 x ... x D_s x D(SU(2))^h)/Gamma.
//
// Three independent routes are provided:
//   * closed form: exact block formulas multiplied in the fusion ring,
//   * the equivariant S-matrix sum, evaluated in floating point in the
//     idempotent basis and rounded back to integers,
//   * fixed point localization values Q(M)(t_l) of the star block.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verlinde/fusion_ring.hpp"
#include "verlinde/prequant.hpp"

namespace verlinde {

enum class QuantPath { ClosedForm, FsFloat, Localization };

std::string to_string(QuantPath path);
QuantPath parse_quant_path(const std::string& name);

struct QuantizationResult {
  FusionElement element;
  Integer reduced;  // trace(element)
  QuantPath path = QuantPath::ClosedForm;
  std::optional<PrequantChoice> choice;
};

/// chi = tau_0 - tau_2 + tau_4 - ... + (-1)^{k/2} tau_k, k even.
FusionElement chi_element(Level level);

/// Quantization of (D_*)^r / Gamma' for the pre-quantization whose psi bits
/// on the r star slots are `star_psi` (ignored for r <= 1).
FusionElement quantize_star_block(Level level, int r, std::span<const std::uint8_t> star_psi);

/// Q(D_j) = tau_m.
FusionElement quantize_conjugacy_class(Level level, int label);

/// Q(D(SU(2))) = sum_m tau_m^2.
FusionElement quantize_double_su2(Level level);

/// Q(D(SO(3))) for the flat twist `phi_bits` on Z x Z (two bits).
FusionElement quantize_double_so3(Level level, std::span<const std::uint8_t> phi_bits);

/// Exact blockwise product of the star block, the remaining conjugacy
/// classes and the SO(3) doubles.
QuantizationResult quantize_surface(const SurfaceData& surface, const PrequantChoice& choice);

/// Equivariant S-matrix sum with explicit phases, one per element of
/// `gammas`. Exposed so that callers can audit the phase assignment.
QuantizationResult fs_formula_with_phases(const SurfaceData& surface,
                                          const std::vector<GammaElement>& gammas,
                                          std::span<const int> phases,
                                          double tolerance = kDefaultTolerance);

/// Idempotent coordinates of the S-matrix sum, before rounding.
IdempotentVector fs_idempotent(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                               std::span<const int> phases);

QuantizationResult fs_formula(const SurfaceData& surface, const PrequantChoice& choice,
                              double tolerance = kDefaultTolerance);

/// Scalar S-matrix sum for Q(M // SU(2)); throws NonIntegralValue when it is
/// not within tolerance of an integer.
Integer reduced_quantization(const SurfaceData& surface, const PrequantChoice& choice,
                             double tolerance = kDefaultTolerance);
double reduced_quantization_value(const SurfaceData& surface, const std::vector<GammaElement>& gammas,
                                  std::span<const int> phases);

/// Simply connected case: prod_j tau_{m_j} * (sum_m tau_m^2)^h.
QuantizationResult verlinde_baseline(const SurfaceData& surface);

/// Q(M)(t_l) for M = (D_*)^r / Gamma', summed over the fixed point
/// components of t_l.
double localization_evaluate(Level level, int r, std::span<const std::uint8_t> star_psi, int l);

/// Weight phi^{(gamma)} of t_* on the pre-quantum line bundle over the fixed
/// component F^{(gamma)} of the star block, gamma given by its star bits.
int star_fixed_point_weight(Level level, int r, std::span<const std::uint8_t> star_psi,
                            std::span<const std::uint8_t> gamma_bits);

}  // namespace verlinde
