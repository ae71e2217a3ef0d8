#include "verlinde/oracle.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <unordered_map>
#include <sstream>

#include "verlinde/detail/compensated_sum.hpp"
#include "verlinde/quant.hpp"

namespace verlinde::oracle {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

// Plain S-matrix, computed with std::sin and no argument reduction so that
// it shares nothing with the library's table.
std::vector<double> plain_s_matrix(int k) {
  const int n = k + 1;
  std::vector<double> s(static_cast<std::size_t>(n * n));
  const double norm = 1.0 / std::sqrt(k / 2.0 + 1.0);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      s[static_cast<std::size_t>(m * n + l)] =
          norm * std::sin(std::numbers::pi * (l + 1) * (m + 1) / (k + 2));
  return s;
}

std::string params(std::initializer_list<std::pair<const char*, long long>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, value] : kv) {
    if (!first) os << ' ';
    os << key << '=' << value;
    first = false;
  }
  return os.str();
}

// Accumulates the worst deviation over many items into one report line.
class Aggregate {
 public:
  Aggregate(std::string name, std::string params, double tolerance)
      : check_{std::move(name), std::move(params), true, 0.0, tolerance, {}} {}

  void observe(double deviation, const std::string& where) {
    if (!(deviation <= check_.deviation)) check_.deviation = deviation;  // NaN propagates
    if (!(deviation <= check_.tolerance)) fail(where);
  }
  void fail(const std::string& why) {
    if (check_.pass) check_.message = why;
    check_.pass = false;
  }
  void fail_with(double deviation, const std::string& why) {
    check_.deviation = std::max(check_.deviation, deviation);
    fail(why);
  }
  Check done() && { return std::move(check_); }

 private:
  Check check_;
};

double max_abs_diff(const FusionElement& a, const FusionElement& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    Integer diff = abs(a.coeffs()[i] - b.coeffs()[i]);
    d = std::max(d, diff.convert_to<double>());
  }
  return d;
}

}  // namespace

double character_value(Level level, int degree, int l) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  const double theta = std::numbers::pi * (l + 1) / (level.k() + 2);
  detail::CompensatedSum sum;
  for (int i = 0; i <= degree; ++i) sum += std::cos((degree - 2 * i) * theta);
  return sum.value();
}

FusionElement reduce_by_evaluation(Level level, const CharacterPoly& poly, double tolerance) {
  const int k = level.k();
  const int n = k + 1;
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    detail::CompensatedSum sum;
    for (const auto& [degree, c] : poly.terms()) sum += c.convert_to<double>() * character_value(level, degree, l);
    values[static_cast<std::size_t>(l)] = sum.value();
  }
  const auto s = plain_s_matrix(k);
  std::vector<Integer> coeffs(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    detail::CompensatedSum sum;
    for (int l = 0; l < n; ++l)
      sum += values[static_cast<std::size_t>(l)] * s[static_cast<std::size_t>(l)] *
             s[static_cast<std::size_t>(m * n + l)];
    auto r = nearest_integer(sum.value(), tolerance);
    if (!r) throw NonIntegralValue("evaluation-based reduction produced a non-integral coefficient");
    coeffs[static_cast<std::size_t>(m)] = *r;
  }
  return FusionElement(level, std::move(coeffs));
}

StructureConstants::StructureConstants(Level level, std::vector<Integer> table)
    : level_(level), table_(std::move(table)) {
  const auto n = static_cast<std::size_t>(level.rank());
  if (table_.size() != n * n * n) throw std::invalid_argument("structure constant table has wrong size");
}

const Integer& StructureConstants::operator()(int a, int b, int c) const {
  const int n = level_.rank();
  if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) throw IndexOutOfRange("structure constant index");
  return table_[static_cast<std::size_t>((a * n + b) * n + c)];
}

StructureConstants structure_constants_verlinde(Level level, double tolerance) {
  const int k = level.k();
  if (k > 64) throw std::invalid_argument("structure constants oracle is limited to k <= 64");
  const int n = k + 1;
  const auto s = plain_s_matrix(k);
  auto S = [&](int m, int l) { return s[static_cast<std::size_t>(m * n + l)]; };
  std::vector<Integer> table(static_cast<std::size_t>(n * n * n));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        detail::CompensatedSum sum;
        for (int l = 0; l < n; ++l) sum += S(a, l) * S(b, l) * S(c, l) / S(0, l);
        auto r = nearest_integer(sum.value(), tolerance);
        if (!r) {
          std::ostringstream os;
          os << "Verlinde sum N_{" << a << "," << b << "}^" << c << " = " << sum.value() << " is not integral";
          throw NonIntegralValue(os.str());
        }
        table[static_cast<std::size_t>((a * n + b) * n + c)] = *r;
        table[static_cast<std::size_t>((b * n + a) * n + c)] = *r;
      }
    }
  }
  return StructureConstants(level, std::move(table));
}

Integer classical_verlinde_number(Level level, int genus, double tolerance) {
  const int k = level.k();
  if (k > 64) throw std::invalid_argument("Verlinde number oracle is limited to k <= 64");
  if (genus < 0) throw std::invalid_argument("genus must be non-negative");
  const HighFloat pi = boost::math::constants::pi<HighFloat>();
  const HighFloat norm = 1 / sqrt(HighFloat(k) / 2 + 1);
  HighFloat sum = 0;
  for (int l = 0; l <= k; ++l) {
    const HighFloat s0 = norm * sin(pi * (l + 1) / (k + 2));
    sum += pow(s0, 2 - 2 * genus);
  }
  const HighFloat r = round(sum);
  if (abs(sum - r) > tolerance) {
    std::ostringstream os;
    os << "Verlinde sum " << sum << " is not integral";
    throw NonIntegralValue(os.str());
  }
  return r.convert_to<Integer>();
}

std::string to_string(TableClass c) {
  switch (c) {
    case TableClass::BasePower: return "power";
    case TableClass::Plus: return "+";
    case TableClass::Minus: return "-";
    case TableClass::Trivial: return "psi=1";
    case TableClass::Nontrivial: return "psi!=1";
    case TableClass::SumZero: return "sum=0";
    case TableClass::SumMinusTwo: return "sum=-2";
  }
  return "?";
}

std::vector<TableClass> table_classes(int r) {
  switch (r) {
    case 2: return {TableClass::BasePower, TableClass::Plus, TableClass::Minus};
    case 3: return {TableClass::BasePower, TableClass::Trivial, TableClass::Nontrivial};
    case 4: return {TableClass::BasePower, TableClass::Trivial, TableClass::SumZero, TableClass::SumMinusTwo};
    default: throw std::invalid_argument("tables exist for r = 2, 3, 4 only");
  }
}

FusionElement closed_form_tables(Level level, int r, TableClass choice_class) {
  const int k = level.k();
  const auto classes = table_classes(r);
  if (std::find(classes.begin(), classes.end(), choice_class) == classes.end())
    throw std::invalid_argument("choice class " + to_string(choice_class) + " does not apply to r = " +
                                std::to_string(r));
  if (k % 2 != 0 || (r >= 3 && k % 4 != 0)) {
    std::ostringstream os;
    os << "inadmissible: r = " << r << " needs k ∈ " << (r >= 3 ? "4N" : "2N") << ", got k = " << k;
    throw NotAdmissible(os.str());
  }
  const int n = k + 1;
  std::vector<Integer> c(static_cast<std::size_t>(n));
  auto at = [&](int i) -> Integer& { return c[static_cast<std::size_t>(i)]; };

  if (r == 2) {
    for (int i = 0; i <= k; i += 2) {
      if (choice_class == TableClass::BasePower) at(i) = 1;
      else if (choice_class == TableClass::Plus && i % 4 == 0) at(i) = 1;
      else if (choice_class == TableClass::Minus && i % 4 == 2) at(i) = 1;
    }
    return FusionElement(level, std::move(c));
  }

  if (r == 3) {
    for (int j = 0; 2 * j <= k; ++j) {
      const long long base = (2 * j <= k / 2) ? 2 * j + 1 : k - 2 * j + 1;
      if (choice_class == TableClass::BasePower) {
        at(2 * j) = base;
        continue;
      }
      const long long delta = (choice_class == TableClass::Trivial) ? 1 : 0;
      const long long sign = (j % 2 == 0) ? 1 : -1;
      const long long numerator = base + (4 * delta - 1) * sign;
      if (numerator % 4 != 0) throw InexactDivision("r = 3 table entry is not integral");
      at(2 * j) = numerator / 4;
    }
    return FusionElement(level, std::move(c));
  }

  // r == 4
  std::vector<long long> power(static_cast<std::size_t>(n), 0);
  for (long long j = 0; 2 * j <= k; ++j) power[static_cast<std::size_t>(2 * j)] = k / 2 + 1 - 2 * j * j + j * k;
  if (choice_class == TableClass::BasePower) {
    for (int i = 0; i < n; ++i) at(i) = power[static_cast<std::size_t>(i)];
    return FusionElement(level, std::move(c));
  }
  const long long dim = k / 2 + 1;
  const long long sign = ((k / 4) % 2 == 0) ? 1 : -1;
  long long chi_weight = 0;
  switch (choice_class) {
    case TableClass::Trivial: chi_weight = 6 * sign + dim; break;
    case TableClass::SumZero: chi_weight = -dim; break;
    case TableClass::SumMinusTwo: chi_weight = -2 * sign + dim; break;
    default: break;
  }
  for (int j = 0; 2 * j <= k; ++j) {
    const long long chi = (j % 2 == 0) ? 1 : -1;
    const long long numerator = power[static_cast<std::size_t>(2 * j)] + chi_weight * chi;
    if (numerator % 8 != 0) throw InexactDivision("r = 4 table entry is not integral");
    at(2 * j) = numerator / 8;
  }
  return FusionElement(level, std::move(c));
}

TableClass classify_choice(int r, const std::vector<std::uint8_t>& star_psi) {
  if (star_psi.size() != static_cast<std::size_t>(r)) throw std::invalid_argument("psi must cover the star slots");
  auto psi = [&](unsigned mask) {
    unsigned parity = 0;
    for (int i = 0; i < r; ++i)
      if ((mask >> i) & 1U) parity ^= star_psi[static_cast<std::size_t>(i)] & 1U;
    return parity ? -1 : 1;
  };
  if (r == 2) return psi(0b11U) > 0 ? TableClass::Plus : TableClass::Minus;
  int sum_two = 0;
  int full = 1;
  for (unsigned mask = 1; mask < (1U << r); ++mask) {
    const int w = std::popcount(mask);
    if (w == 2) sum_two += psi(mask);
    if (w == 4) full = psi(mask);
  }
  if (r == 3) return sum_two == 3 ? TableClass::Trivial : TableClass::Nontrivial;
  if (r == 4) {
    if (sum_two == 6 && full == 1) return TableClass::Trivial;
    if (sum_two == 0 && full == -1) return TableClass::SumZero;
    if (sum_two == -2 && full == 1) return TableClass::SumMinusTwo;
    throw std::logic_error("unexpected character sum for r = 4");
  }
  throw std::invalid_argument("classification exists for r = 2, 3, 4 only");
}

bool VerificationReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::size_t VerificationReport::failures() const noexcept {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

void VerificationReport::merge(VerificationReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
}

std::vector<SurfaceData> sweep_surfaces(int max_level, int max_r, int max_genus, int max_other,
                                        std::size_t gamma_cap) {
  std::vector<SurfaceData> out;
  for (int k = 0; k <= max_level; ++k) {
    const Level level(k);
    std::set<int> pool{0, 1, k};
    if (k % 2 == 0) pool.insert(k / 2);
    std::vector<int> others;
    for (int m : pool)
      if (m <= k && 2 * m != k) others.push_back(m);

    // Multisets of size <= max_other drawn from `others`.
    std::vector<std::vector<int>> multisets{{}};
    for (int size = 1; size <= max_other; ++size) {
      std::vector<int> idx(static_cast<std::size_t>(size), 0);
      while (!others.empty()) {
        std::vector<int> ms;
        for (int i : idx) ms.push_back(others[static_cast<std::size_t>(i)]);
        multisets.push_back(ms);
        int pos = size - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == static_cast<int>(others.size()) - 1) --pos;
        if (pos < 0) break;
        const int next = idx[static_cast<std::size_t>(pos)] + 1;
        for (int p = pos; p < size; ++p) idx[static_cast<std::size_t>(p)] = next;
      }
    }

    for (int h = 0; h <= max_genus; ++h) {
      for (int r = 0; r <= max_r; ++r) {
        if (r > 0 && k % 2 != 0) continue;
        for (const auto& ms : multisets) {
          SurfaceData s{level, h, {}};
          // Interleave so that star slots are not always a prefix.
          std::size_t o = 0;
          for (int i = 0; i < r; ++i) {
            if (o < ms.size() && i % 2 == 1) s.labels.push_back(ms[o++]);
            s.labels.push_back(k / 2);
          }
          while (o < ms.size()) s.labels.push_back(ms[o++]);
          if (!check_prequantization(s).admissible()) continue;
          if (gamma_order(s) > gamma_cap) continue;
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

namespace {

std::string surface_params(const SurfaceData& s) {
  std::ostringstream os;
  os << "k=" << s.level.k() << " h=" << s.genus << " labels=[";
  for (std::size_t i = 0; i < s.labels.size(); ++i) os << (i ? "," : "") << s.labels[i];
  os << "]";
  return os.str();
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string out;
  for (auto b : bits) out += static_cast<char>('0' + b);
  return out;
}

// --- ring checks ------------------------------------------------------------

Check check_s_matrix(Level level) {
  const auto s = s_matrix(level);
  const int n = level.rank();
  Aggregate orth("s_matrix_orthogonality", params({{"k", level.k()}}), 1e-10);
  Aggregate sym("s_matrix_symmetry", params({{"k", level.k()}}), 1e-12);
  double worst = 0.0;
  double worst_sym = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      detail::CompensatedSum dot;
      for (int l = 0; l < n; ++l)
        dot += s[static_cast<std::size_t>(a)][static_cast<std::size_t>(l)] *
               s[static_cast<std::size_t>(b)][static_cast<std::size_t>(l)];
      worst = std::max(worst, std::fabs(dot.value() - (a == b ? 1.0 : 0.0)));
      worst_sym = std::max(worst_sym, std::fabs(s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                                                s[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]));
    }
  }
  orth.observe(worst, "max |S S^T - I|");
  sym.observe(worst_sym, "max |S - S^T|");
  Check c = std::move(orth).done();
  Check d = std::move(sym).done();
  if (!d.pass) {
    c.pass = false;
    c.message += (c.message.empty() ? "" : "; ") + std::string("symmetry: ") + d.message;
  }
  c.name = "s_matrix";
  return c;
}

Check check_structure_constants(Level level, double tolerance) {
  Aggregate agg("structure_constants", params({{"k", level.k()}}), 0.0);
  try {
    const auto n = structure_constants_verlinde(level, tolerance);
    for (int a = 0; a <= level.k(); ++a) {
      for (int b = 0; b <= level.k(); ++b) {
        const auto prod = multiply(FusionElement::basis(level, a), FusionElement::basis(level, b));
        for (int c = 0; c <= level.k(); ++c) {
          const Integer& got = prod[static_cast<std::size_t>(c)];
          const Integer& want = n(a, b, c);
          std::ostringstream where;
          where << "N_{" << a << "," << b << "}^" << c << ": multiply " << got << ", Verlinde " << want;
          if (got != want) agg.fail_with(1.0, where.str());
          if (want != 0 && want != 1) agg.fail_with(1.0, where.str() + " (not in {0,1})");
        }
      }
    }
  } catch (const Error& e) {
    agg.fail(e.what());
  }
  return std::move(agg).done();
}

Check check_reduction(Level level, double tolerance) {
  Aggregate agg("reduce_character", params({{"k", level.k()}}), 0.0);
  const int top = 4 * (level.k() + 2);
  try {
    for (int m = 0; m <= top; ++m) {
      const auto poly = CharacterPoly::character(m);
      const auto folded = reduce_character(level, poly);
      const auto evaluated = reduce_by_evaluation(level, poly, tolerance);
      if (folded != evaluated)
        agg.fail_with(max_abs_diff(folded, evaluated), "chi_" + std::to_string(m) + ": " + folded.to_string() +
                                                            " vs " + evaluated.to_string());
    }
  } catch (const Error& e) {
    agg.fail(e.what());
  }
  return std::move(agg).done();
}

FusionElement random_element(Level level, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  std::vector<Integer> c(static_cast<std::size_t>(level.rank()));
  for (auto& x : c) x = dist(rng);
  return FusionElement(level, std::move(c));
}

Check check_homomorphism(Level level, int pairs) {
  Aggregate agg("evaluation_homomorphism", params({{"k", level.k()}, {"pairs", pairs}}), 1e-8);
  std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned long long>(level.k()));
  for (int p = 0; p < pairs; ++p) {
    const auto a = random_element(level, rng, 6);
    const auto b = random_element(level, rng, 6);
    const auto ab = multiply(a, b);
    for (int l = 0; l <= level.k(); ++l) {
      const double lhs = evaluate_at_special_point(ab, l);
      const double rhs = evaluate_at_special_point(a, l) * evaluate_at_special_point(b, l);
      agg.observe(std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs)), "pair " + std::to_string(p) + " l=" + std::to_string(l));
    }
  }
  return std::move(agg).done();
}

Check check_round_trip(Level level, int samples, double tolerance) {
  Aggregate agg("idempotent_round_trip", params({{"k", level.k()}, {"samples", samples}}), 0.0);
  std::mt19937_64 rng(0xb0b0ULL + static_cast<unsigned long long>(level.k()));
  for (int i = 0; i < samples; ++i) {
    const auto x = random_element(level, rng, 50);
    try {
      const auto back = from_idempotent(to_idempotent(x), tolerance);
      if (back != x) agg.fail_with(max_abs_diff(back, x), "sample " + std::to_string(i));
    } catch (const Error& e) {
      agg.fail(e.what());
    }
  }
  return std::move(agg).done();
}

// Product of float tau-expansions through integer structure constants.
std::vector<double> float_product(Level level, const std::vector<double>& x, const std::vector<double>& y) {
  const int n = level.rank();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double w = x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)];
      // tau_a tau_b = sum over c = |a-b|, |a-b|+2, ..., min(a+b, 2k-a-b)
      const auto prod = multiply(FusionElement::basis(level, a), FusionElement::basis(level, b));
      for (int c = 0; c < n; ++c) {
        const Integer& nc = prod[static_cast<std::size_t>(c)];
        if (nc != 0) out[static_cast<std::size_t>(c)] += w * nc.convert_to<double>();
      }
    }
  }
  return out;
}

Check check_idempotency(Level level) {
  Aggregate agg("idempotency", params({{"k", level.k()}}), 1e-8);
  const int n = level.rank();
  std::vector<std::pair<int, int>> pairs;
  if (n <= 13) {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) pairs.emplace_back(a, b);
  } else {
    for (int a = 0; a < n; ++a) {
      pairs.emplace_back(a, a);
      pairs.emplace_back(a, (a * 7 + 3) % n);
    }
  }
  const auto s = s_matrix(level);
  for (auto [a, b] : pairs) {
    const auto prod = float_product(level, idempotent_tau_coefficients(level, a), idempotent_tau_coefficients(level, b));
    for (int l = 0; l < n; ++l) {
      detail::CompensatedSum value;
      for (int c = 0; c < n; ++c) value += prod[static_cast<std::size_t>(c)] * basis_value(level, c, l);
      const double expected = (a == b && l == a) ? 1.0 : 0.0;
      agg.observe(std::fabs(value.value() - expected),
                  "(" + std::to_string(a) + "," + std::to_string(b) + ") at l=" + std::to_string(l));
    }
  }
  return std::move(agg).done();
}

// --- group checks -----------------------------------------------------------

Check check_group(const SurfaceData& surface) {
  Aggregate agg("gamma_and_choices", surface_params(surface), 0.0);
  const auto gammas = enumerate_gamma(surface);
  const int r = surface.star_count();
  const std::size_t expected = std::size_t{1} << (2 * surface.genus + (r >= 1 ? r - 1 : 0));
  if (gammas.size() != expected)
    agg.fail_with(1.0, "|Gamma| = " + std::to_string(gammas.size()) + ", expected " + std::to_string(expected));
  if (!gammas.front().is_identity()) agg.fail("first element is not the identity");
  for (const auto& g : gammas) {
    if (g.boundary_weight(surface.boundary_count()) % 2 != 0) agg.fail("odd boundary parity " + bits_string(g.bits));
    for (int j = 0; j < surface.boundary_count(); ++j)
      if (g.bits[static_cast<std::size_t>(j)] && !surface.is_star(surface.labels[static_cast<std::size_t>(j)]))
        agg.fail("non-star slot moved by " + bits_string(g.bits));
  }
  if (!check_prequantization(surface).admissible()) return std::move(agg).done();

  const auto choices = enumerate_choices(surface);
  if (choices.size() != gammas.size()) agg.fail("choice count differs from |Gamma|");
  if (!choices.front().is_trivial()) agg.fail("first choice is not trivial");
  // Products are looked up by index so the all-pairs homomorphism check
  // costs |Gamma|^2 table reads per choice.
  const bool small = gammas.size() <= 1024 && surface.slot_count() <= 64;
  std::vector<std::size_t> product;
  if (small) {
    auto key = [](const GammaElement& g) {
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < g.bits.size(); ++i) v |= std::uint64_t{g.bits[i]} << i;
      return v;
    };
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < gammas.size(); ++i) index.emplace(key(gammas[i]), i);
    product.resize(gammas.size() * gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i)
      for (std::size_t j = 0; j < gammas.size(); ++j) {
        const auto it = index.find(key(gammas[i]) ^ key(gammas[j]));
        if (it == index.end()) {
          agg.fail("Gamma not closed under multiplication");
          return std::move(agg).done();
        }
        product[i * gammas.size() + j] = it->second;
      }
  }
  // phi' = psi * w where w depends on gamma only; w is a character on the
  // star part when 8 | k and on the double part when 4 | k.
  std::vector<int> correction;
  for (const auto& g : gammas) correction.push_back(phase_factor(surface, choices.front(), g));
  if (small) {
    const int k = surface.level.k();
    const std::size_t n = gammas.size();
    auto supported = [&](const GammaElement& g, bool stars) {
      for (std::size_t i = 0; i < g.bits.size(); ++i)
        if (g.bits[i] && (static_cast<int>(i) < surface.boundary_count()) != stars) return false;
      return true;
    };
    for (bool stars : {true, false}) {
      if (k % (stars ? 8 : 4) != 0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (!supported(gammas[i], stars)) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (supported(gammas[j], stars) && correction[product[i * n + j]] != correction[i] * correction[j]) {
            agg.fail(std::string("phase correction not multiplicative on the ") + (stars ? "star" : "double") +
                     " subgroup");
            i = n;
            break;
          }
      }
    }
  }
  std::set<std::vector<int>> signatures;
  for (const auto& psi : choices) {
    if (!is_canonical(surface, psi)) agg.fail("non-canonical choice " + bits_string(psi.psi_bits));
    long long total = 0;
    std::vector<int> signature;
    signature.reserve(gammas.size());
    for (const auto& g : gammas) {
      signature.push_back(psi(g));
      total += signature.back();
    }
    const long long want = psi.is_trivial() ? static_cast<long long>(gammas.size()) : 0;
    if (total != want) agg.fail_with(std::fabs(double(total - want)), "orthogonality fails for " + bits_string(psi.psi_bits));
    if (phase_factor(surface, psi, gammas.front()) != 1) agg.fail("phi'(eps) != 1");
    if (small) {
      const std::size_t n = gammas.size();
      bool multiplicative = true;
      for (std::size_t i = 0; i < n && multiplicative; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (signature[product[i * n + j]] != signature[i] * signature[j]) {
            multiplicative = false;
            break;
          }
      if (!multiplicative) agg.fail("psi not multiplicative " + bits_string(psi.psi_bits));
    }
    for (std::size_t i = 0; i < gammas.size(); ++i)
      if (phase_factor(surface, psi, gammas[i]) != correction[i] * signature[i]) {
        agg.fail("phi'/psi depends on psi at " + bits_string(gammas[i].bits));
        break;
      }
    signatures.insert(std::move(signature));
  }
  if (signatures.size() != choices.size()) agg.fail("enumerated choices are not pairwise inequivalent");
  return std::move(agg).done();
}

// --- quantization checks ----------------------------------------------------

std::vector<std::vector<std::uint8_t>> star_choices(int r) {
  // Canonical star restrictions: last bit zero.
  std::vector<std::vector<std::uint8_t>> out;
  const int free = std::max(r - 1, 0);
  for (unsigned mask = 0; mask < (1U << free); ++mask) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < free; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    out.push_back(std::move(bits));
  }
  return out;
}

bool star_admissible(int k, int r) { return (r == 0) || (k % 2 == 0 && (r < 3 || k % 4 == 0)); }

Check check_tables(Level level, int r) {
  Aggregate agg("star_block_vs_tables", params({{"k", level.k()}, {"r", r}}), 0.0);
  try {
    const auto tau = FusionElement::basis(level, level.half());
    const auto top = power(tau, r);
    if (top != closed_form_tables(level, r, TableClass::BasePower))
      agg.fail_with(max_abs_diff(top, closed_form_tables(level, r, TableClass::BasePower)), "power table mismatch");
    std::map<TableClass, int> counts;
    for (const auto& psi : star_choices(r)) {
      const TableClass cls = classify_choice(r, psi);
      ++counts[cls];
      const auto got = quantize_star_block(level, r, psi);
      const auto want = closed_form_tables(level, r, cls);
      if (got != want)
        agg.fail_with(max_abs_diff(got, want), "psi=" + bits_string(psi) + " class " + to_string(cls) + ": " +
                                                   got.to_string() + " vs " + want.to_string());
    }
    if (r == 4 && (counts[TableClass::Trivial] != 1 || counts[TableClass::SumZero] != 4 ||
                   counts[TableClass::SumMinusTwo] != 3))
      agg.fail("r = 4 class counts are not 1/4/3");
    if (r == 3 && (counts[TableClass::Trivial] != 1 || counts[TableClass::Nontrivial] != 3))
      agg.fail("r = 3 class counts are not 1/3");
  } catch (const Error& e) {
    agg.fail(e.what());
  }
  return std::move(agg).done();
}

Check check_star_identities(Level level, int r) {
  Aggregate agg("star_block_identities", params({{"k", level.k()}, {"r", r}}), 0.0);
  try {
    const auto tau = FusionElement::basis(level, level.half());
    const auto top = power(tau, r);
    FusionElement sum(level);
    for (const auto& psi : star_choices(r)) {
      const auto q = quantize_star_block(level, r, psi);
      sum += q;
      if (r == 3) {
        for (int j = 0; 2 * j <= level.k(); ++j)
          if (q[static_cast<std::size_t>(2 * j)] != q[static_cast<std::size_t>(level.k() - 2 * j)])
            agg.fail("midpoint symmetry fails for psi=" + bits_string(psi));
      }
    }
    // Character orthogonality leaves only the gamma = eps term.
    if (sum != top) agg.fail_with(max_abs_diff(sum, top), "sum over choices is not (tau_{k/2})^r");
  } catch (const Error& e) {
    agg.fail(e.what());
  }
  return std::move(agg).done();
}

Check check_localization(Level level, int r) {
  Aggregate agg("localization", params({{"k", level.k()}, {"r", r}}), 1e-8);
  try {
    for (const auto& psi : star_choices(r)) {
      const auto q = quantize_star_block(level, r, psi);
      for (int l = 0; l <= level.k(); ++l) {
        const double fixed = localization_evaluate(level, r, psi, l);
        const double direct = evaluate_at_special_point(q, l);
        agg.observe(std::fabs(fixed - direct) / (1.0 + std::fabs(direct)),
                    "psi=" + bits_string(psi) + " l=" + std::to_string(l));
      }
    }
  } catch (const Error& e) {
    agg.fail(e.what());
  }
  return std::move(agg).done();
}

}  // namespace

VerificationReport run_verification_suite(int max_level, int max_r, int max_genus, const SuiteOptions& options) {
  VerificationReport report;
  const double tol = options.tolerance;
  max_level = std::max(max_level, 0);
  max_r = std::max(max_r, 0);
  max_genus = std::max(max_genus, 0);

  for (int k = 0; k <= max_level; ++k) {
    const Level level(k);
    report.checks.push_back(check_s_matrix(level));
    if (k <= 64) report.checks.push_back(check_structure_constants(level, tol));
    if (k <= 32) report.checks.push_back(check_reduction(level, tol));
    report.checks.push_back(check_homomorphism(level, 10));
    report.checks.push_back(check_round_trip(level, 10, tol));
    if (k <= 40) report.checks.push_back(check_idempotency(level));

    // Double of SU(2): genus-one count is the number of level-k weights.
    {
      Aggregate agg("double_su2_trace", params({{"k", k}}), 0.0);
      const Integer t = trace(quantize_double_su2(level));
      if (t != k + 1) agg.fail_with(1.0, "trace " + t.str());
      report.checks.push_back(std::move(agg).done());
    }
    if (k <= 32) {
      Aggregate agg("classical_verlinde", params({{"k", k}, {"max_genus", 4}}), 0.0);
      try {
        for (int g = 0; g <= 4; ++g) {
          const Integer want = classical_verlinde_number(level, g, tol);
          const Integer got = verlinde_baseline(SurfaceData{level, g, {}}).reduced;
          if (got != want) agg.fail_with(1.0, "g=" + std::to_string(g) + ": " + got.str() + " vs " + want.str());
        }
      } catch (const Error& e) {
        agg.fail(e.what());
      }
      report.checks.push_back(std::move(agg).done());
    }

    for (int r = 2; r <= max_r; ++r) {
      if (!star_admissible(k, r)) continue;
      if (r <= 4) report.checks.push_back(check_tables(level, r));
      if (r <= 6) report.checks.push_back(check_star_identities(level, r));
    }
    if (k % 2 == 0 && max_r >= 2) {
      Aggregate agg("pair_identity", params({{"k", k}}), 0.0);
      const auto plus = quantize_star_block(level, 2, std::vector<std::uint8_t>{0, 0});
      const auto minus = quantize_star_block(level, 2, std::vector<std::uint8_t>{1, 0});
      const auto top = power(FusionElement::basis(level, level.half()), 2);
      if (plus + minus != top) agg.fail("Q_+ + Q_- != (tau_{k/2})^2");
      report.checks.push_back(std::move(agg).done());
    }
    for (int r = 0; r <= max_r; ++r)
      if (star_admissible(k, r)) report.checks.push_back(check_localization(level, r));
  }

  // Surfaces: group structure and cross-path agreement.
  const std::size_t cap = std::size_t{1} << 9;
  for (const auto& surface : sweep_surfaces(max_level, max_r, max_genus, 2, cap)) {
    report.checks.push_back(check_group(surface));

    Aggregate cross("cross_path", surface_params(surface), tol);
    Aggregate reduced("reduced_vs_trace", surface_params(surface), 0.0);
    long long negative = 0;
    const auto gammas = enumerate_gamma(surface);
    for (const auto& psi : enumerate_choices(surface)) {
      const std::string where = "psi=" + bits_string(psi.psi_bits);
      try {
        const auto closed = quantize_surface(surface, psi);
        std::vector<int> phases;
        for (const auto& g : gammas) phases.push_back(phase_factor(surface, psi, g));
        if (options.phase_mutator) options.phase_mutator(surface, psi, phases);

        const auto iv = fs_idempotent(surface, gammas, phases);
        // Worst distance of the float coefficients from the exact ones.
        const auto s = s_matrix(surface.level);
        double worst = 0.0;
        for (int m = 0; m <= surface.level.k(); ++m) {
          detail::CompensatedSum sum;
          for (int l = 0; l <= surface.level.k(); ++l)
            sum += iv.values[static_cast<std::size_t>(l)] * s[0][static_cast<std::size_t>(l)] *
                   s[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)];
          worst = std::max(worst, std::fabs(sum.value() - closed.element[static_cast<std::size_t>(m)].convert_to<double>()));
        }
        const auto fs = fs_formula_with_phases(surface, gammas, phases, tol);
        cross.observe(worst, where);
        if (fs.element != closed.element)
          cross.fail_with(max_abs_diff(fs.element, closed.element),
                          where + ": " + closed.element.to_string() + " vs " + fs.element.to_string());

        const double scalar = reduced_quantization_value(surface, gammas, phases);
        const auto rounded = nearest_integer(scalar, tol);
        if (!rounded || *rounded != fs.reduced || fs.reduced != closed.reduced)
          reduced.fail_with(std::fabs(scalar - closed.reduced.convert_to<double>()),
                            where + ": scalar sum " + std::to_string(scalar) + ", trace " + closed.reduced.str());
        for (const auto& c : closed.element.coeffs())
          if (c < 0) ++negative;
      } catch (const NonIntegralCoefficient& e) {
        cross.fail(where + ": NonIntegralCoefficient: " + e.what());
      } catch (const Error& e) {
        cross.fail(where + ": " + e.what());
      }
    }
    report.checks.push_back(std::move(cross).done());
    report.checks.push_back(std::move(reduced).done());
    if (negative > 0) {
      Check warn{"nonnegativity_advisory", surface_params(surface), true, static_cast<double>(negative), 0.0,
                 "negative multiplicities observed (reported, not an invariant)"};
      report.checks.push_back(std::move(warn));
    }
  }
  return report;
}

}  // namespace verlinde::oracle
