#pragma once

// Brute-force validators. Nothing in here calls the folding rule or the
// quantization formulas it is meant to check; each routine takes an
// independent route (cosine sums, Verlinde sums, literal multiplicity tables).

#include <functional>
#include <string>
#include <vector>

#include "verlinde/fusion_ring.hpp"
#include "verlinde/prequant.hpp"

namespace verlinde::oracle {

/// chi_m(t_l) as the trace of t_l = diag(q^{l+1}, q^{-(l+1)}) on S^m(C^2),
/// i.e. sum_{i=0}^{m} cos((m - 2i)(l+1) pi / (k+2)).
double character_value(Level level, int degree, int l);

/// Reduction of a character polynomial through its values at the special
/// points followed by the inverse S-matrix transform.
FusionElement reduce_by_evaluation(Level level, const CharacterPoly& poly,
                                   double tolerance = kDefaultTolerance);

/// N[a][b][c] = round(sum_l S_{a,l} S_{b,l} S_{c,l} / S_{0,l}).
class StructureConstants {
 public:
  StructureConstants(Level level, std::vector<Integer> table);
  Level level() const noexcept { return level_; }
  const Integer& operator()(int a, int b, int c) const;

 private:
  Level level_;
  std::vector<Integer> table_;
};

StructureConstants structure_constants_verlinde(Level level, double tolerance = kDefaultTolerance);

/// round(sum_l S_{0,l}^{2-2g}).
Integer classical_verlinde_number(Level level, int genus, double tolerance = kDefaultTolerance);

/// Choice classes of the literal multiplicity tables.
enum class TableClass {
  BasePower,    // (tau_{k/2})^r itself
  Plus,         // r = 2, +
  Minus,        // r = 2, -
  Trivial,      // r = 3 or 4, psi = 1
  Nontrivial,   // r = 3, psi != 1
  SumZero,      // r = 4, sum over l(gamma)=2 of psi is 0
  SumMinusTwo,  // r = 4, that sum is -2
};

std::string to_string(TableClass c);
/// Classes that apply to a given star count, BasePower first.
std::vector<TableClass> table_classes(int r);

/// Golden fusion-ring elements written out from the known multiplicity
/// formulas for r = 2, 3, 4 star factors.
FusionElement closed_form_tables(Level level, int r, TableClass choice_class);

/// Class of a star-block choice for r = 3 or 4 (psi restricted to the star
/// slots), decided by summing psi over Gamma'.
TableClass classify_choice(int r, const std::vector<std::uint8_t>& star_psi);

struct Check {
  std::string name;
  std::string params;
  bool pass = true;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string message;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool pass() const noexcept;
  std::size_t failures() const noexcept;
  void merge(VerificationReport other);
};

struct SuiteOptions {
  double tolerance = kDefaultTolerance;
  /// Test hook: lets a fixture corrupt the phase table handed to the
  /// S-matrix sum, keyed by surface. Must be left empty in production.
  std::function<void(const SurfaceData&, const PrequantChoice&, std::vector<int>&)> phase_mutator;
};

/// Runs every ring, group and quantization invariant over levels 0..max_level,
/// star counts up to max_r and genera up to max_genus.
VerificationReport run_verification_suite(int max_level, int max_r, int max_genus,
                                          const SuiteOptions& options = {});

/// Surfaces used by the cross-path sweep: labels drawn from {0, 1, k/2, k}
/// with at most `max_r` stars, at most `max_other` other labels and
/// |Gamma| <= gamma_cap. Only admissible surfaces are returned.
std::vector<SurfaceData> sweep_surfaces(int max_level, int max_r, int max_genus, int max_other,
                                        std::size_t gamma_cap);

}  // namespace verlinde::oracle
