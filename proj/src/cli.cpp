#include "verlinde/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "verlinde/fusion_ring.hpp"
#include "verlinde/oracle.hpp"
#include "verlinde/prequant.hpp"
#include "verlinde/quant.hpp"
#include "verlinde/serialization.hpp"

namespace verlinde::cli {

namespace {

enum class Format { Text, Json, Csv };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw UsageError("unknown format '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) throw UsageError(std::string("invalid ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Integer> parse_coeffs(const std::string& s) {
  std::vector<Integer> out;
  if (s.empty()) return out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(integer_from_json(Json(item)));
    } catch (const std::exception&) {
      throw UsageError("invalid coefficient '" + item + "'");
    }
  }
  return out;
}

std::vector<std::uint8_t> parse_bits(const std::string& s) {
  std::vector<std::uint8_t> out;
  if (s.empty()) return out;
  std::vector<std::string> items = split_list(s);
  if (items.size() == 1 && items[0].size() > 1) {
    std::vector<std::string> chars;
    for (char c : items[0]) chars.emplace_back(1, c);
    items = chars;
  }
  for (const auto& item : items) {
    if (item != "0" && item != "1") throw UsageError("psi bits must be 0 or 1, got '" + item + "'");
    out.push_back(item == "1" ? 1 : 0);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

std::string join_bits(const std::vector<std::uint8_t>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << int(v[i]);
  return os.str();
}

std::string join_coeffs(const FusionElement& e, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < e.coeffs().size(); ++i) os << (i ? sep : "") << e.coeffs()[i];
  return os.str();
}

double read_tolerance() {
  const char* env = std::getenv("VERLINDE_TOLERANCE");
  if (env == nullptr || *env == '\0') return kDefaultTolerance;
  char* end = nullptr;
  const double t = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(t > 0.0)) throw UsageError(std::string("invalid VERLINDE_TOLERANCE '") + env + "'");
  return t;
}

Level make_level(int k) {
  if (k < 0) throw UsageError("--level must be non-negative");
  return Level(k);
}

// --- fusion mult ------------------------------------------------------------

void fusion_mult(int k, const std::string& a_text, const std::string& b_text, Format fmt, std::ostream& out) {
  const Level level = make_level(k);
  auto pad = [&](std::vector<Integer> c, const char* name) {
    if (c.size() > static_cast<std::size_t>(level.rank()))
      throw UsageError(std::string("--") + name + " has more than k+1 coefficients");
    c.resize(static_cast<std::size_t>(level.rank()));
    return FusionElement(level, std::move(c));
  };
  const auto a = pad(parse_coeffs(a_text), "a");
  const auto b = pad(parse_coeffs(b_text), "b");
  const auto p = multiply(a, b);
  switch (fmt) {
    case Format::Json: out << to_json(p).dump() << "\n"; break;
    case Format::Csv: {
      out << "level";
      for (int m = 0; m <= k; ++m) out << ",c" << m;
      out << "\n" << k << "," << join_coeffs(p) << "\n";
      break;
    }
    case Format::Text:
      out << "product " << p.to_string() << "\n";
      out << "coeffs [" << join_coeffs(p) << "]\n";
      break;
  }
}

// --- smatrix ----------------------------------------------------------------

void smatrix(int k, Format fmt, std::ostream& out) {
  const Level level = make_level(k);
  const auto s = s_matrix(level);
  switch (fmt) {
    case Format::Json: {
      Json rows = Json::array();
      for (const auto& row : s) rows.push_back(row);
      out << Json{{"level", k}, {"s", rows}}.dump() << "\n";
      break;
    }
    case Format::Csv:
      out << std::setprecision(17);
      for (const auto& row : s) {
        for (std::size_t l = 0; l < row.size(); ++l) out << (l ? "," : "") << row[l];
        out << "\n";
      }
      break;
    case Format::Text:
      out << "S-matrix at level " << k << " (rows m, columns l)\n";
      out << std::fixed << std::setprecision(10);
      for (const auto& row : s) {
        for (std::size_t l = 0; l < row.size(); ++l) out << (l ? " " : "") << std::setw(13) << row[l];
        out << "\n";
      }
      break;
  }
}

// --- prequant ---------------------------------------------------------------

int prequant(const SurfaceData& surface, Format fmt, std::ostream& out) {
  const auto report = check_prequantization(surface);
  const bool ok = report.admissible();
  std::size_t choices = 0;
  if (ok) choices = enumerate_choices(surface).size();
  switch (fmt) {
    case Format::Json: {
      Json j = to_json(report);
      j["surface"] = to_json(surface);
      j["star_count"] = surface.star_count();
      if (ok) j["choices"] = choices;
      out << j.dump() << "\n";
      break;
    }
    case Format::Csv:
      out << "level,genus,labels,star_count,admissible,choices,reason\n";
      out << surface.level.k() << "," << surface.genus << "," << join_ints(surface.labels, ";") << ","
          << surface.star_count() << "," << (ok ? "true" : "false") << "," << choices << ","
          << (ok ? "" : report.failure_reason()) << "\n";
      break;
    case Format::Text:
      out << "level " << surface.level.k() << " genus " << surface.genus << " labels [" << join_ints(surface.labels)
          << "] stars " << surface.star_count() << "\n";
      for (const auto& c : report.conditions)
        out << "  (" << condition_label(c.condition) << ") " << (c.holds ? "holds " : "FAILS ") << c.description
            << "\n";
      if (ok) {
        out << "admissible\n";
        out << "choices " << choices << "\n";
      } else {
        out << "inadmissible: " << report.failure_reason() << "\n";
      }
      break;
  }
  return ok ? kOk : kNotAdmissible;
}

// --- quantize ---------------------------------------------------------------

struct QuantizeRecord {
  QuantizationResult result;
  std::optional<PrequantChoice> requested;  // when canonicalization changed it
  bool with_reduced = false;
};

void emit_records(const SurfaceData& surface, const std::vector<QuantizeRecord>& records, Format fmt,
                  std::ostream& out) {
  switch (fmt) {
    case Format::Json: {
      auto one = [&](const QuantizeRecord& r) {
        Json j = to_json(r.result);
        if (r.requested) j["requested_choice"] = to_json(*r.requested);
        return j;
      };
      if (records.size() == 1) {
        out << one(records.front()).dump() << "\n";
      } else {
        Json arr = Json::array();
        for (const auto& r : records) arr.push_back(one(r));
        out << arr.dump() << "\n";
      }
      break;
    }
    case Format::Csv:
      out << "level,genus,labels,psi_bits,path,reduced";
      for (int m = 0; m <= surface.level.k(); ++m) out << ",c" << m;
      out << "\n";
      for (const auto& r : records) {
        out << surface.level.k() << "," << surface.genus << "," << join_ints(surface.labels, ";") << ","
            << (r.result.choice ? join_bits(r.result.choice->psi_bits, "") : "") << "," << to_string(r.result.path)
            << "," << r.result.reduced << "," << join_coeffs(r.result.element) << "\n";
      }
      break;
    case Format::Text:
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i) out << "\n";
        out << "level " << surface.level.k() << " genus " << surface.genus << " labels [" << join_ints(surface.labels)
            << "]\n";
        if (r.result.choice) {
          out << "psi [" << join_bits(r.result.choice->psi_bits) << "]";
          if (r.requested) out << " (canonicalized from [" << join_bits(r.requested->psi_bits) << "])";
          out << "\n";
        }
        out << "path " << to_string(r.result.path) << "\n";
        out << "element " << r.result.element.to_string() << "\n";
        out << "coeffs [" << join_coeffs(r.result.element) << "]\n";
        if (r.with_reduced) out << "reduced " << r.result.reduced << "\n";
      }
      break;
  }
}

int quantize(const SurfaceData& surface, const std::string& psi_text, bool all_choices, const std::string& path,
             bool with_reduced, double tolerance, Format fmt, std::ostream& out, std::ostream& err) {
  if (path != "closed" && path != "fs" && path != "both") throw UsageError("--path must be closed, fs or both");
  if (!surface.labels_in_range() || !check_prequantization(surface).admissible()) {
    err << "inadmissible: " << check_prequantization(surface).failure_reason() << "\n";
    return kNotAdmissible;
  }

  std::vector<std::pair<PrequantChoice, std::optional<PrequantChoice>>> choices;
  if (all_choices) {
    for (auto& c : enumerate_choices(surface)) choices.emplace_back(std::move(c), std::nullopt);
  } else {
    PrequantChoice requested{std::vector<std::uint8_t>(static_cast<std::size_t>(surface.slot_count()), 0)};
    if (!psi_text.empty()) {
      requested.psi_bits = parse_bits(psi_text);
      if (requested.psi_bits.size() != static_cast<std::size_t>(surface.slot_count())) {
        std::ostringstream os;
        os << "--psi needs " << surface.slot_count() << " bits (s boundary slots, then 2h double slots), got "
           << requested.psi_bits.size();
        throw UsageError(os.str());
      }
    }
    PrequantChoice canonical = canonicalize(surface, requested);
    std::optional<PrequantChoice> echo;
    if (!(canonical == requested)) echo = requested;
    choices.emplace_back(std::move(canonical), std::move(echo));
  }

  std::vector<QuantizeRecord> records;
  for (const auto& [choice, echo] : choices) {
    std::optional<QuantizationResult> closed;
    std::optional<QuantizationResult> fs;
    if (path != "fs") closed = quantize_surface(surface, choice);
    if (path != "closed") fs = fs_formula(surface, choice, tolerance);
    if (closed && fs && !(closed->element == fs->element)) {
      err << "cross-path mismatch for psi [" << join_bits(choice.psi_bits) << "]: closed_form "
          << closed->element.to_string() << ", fs_float " << fs->element.to_string() << "\n";
      return kConsistencyFailure;
    }
    if (with_reduced) {
      const Integer scalar = reduced_quantization(surface, choice, tolerance);
      const Integer& t = closed ? closed->reduced : fs->reduced;
      if (scalar != t) {
        err << "reduced quantization " << scalar << " differs from trace " << t << "\n";
        return kConsistencyFailure;
      }
    }
    if (closed) records.push_back({std::move(*closed), echo, with_reduced});
    if (fs) records.push_back({std::move(*fs), echo, with_reduced});
  }
  emit_records(surface, records, fmt, out);
  return kOk;
}

// --- tables -----------------------------------------------------------------

int tables(int r, int k, Format fmt, std::ostream& out, std::ostream& err) {
  if (r < 2 || r > 4) throw UsageError("--r must be 2, 3 or 4");
  const Level level = make_level(k);
  if (k % 2 != 0 || (r >= 3 && k % 4 != 0)) {
    err << "inadmissible: " << (r >= 3 ? "condition (iii) requires k ∈ 4N" : "r ≥ 1 requires k ∈ 2N") << "\n";
    return kNotAdmissible;
  }

  struct Row {
    oracle::TableClass cls;
    FusionElement element;
    std::size_t multiplicity = 0;  // number of psi in the class
  };
  std::vector<Row> rows;
  for (auto cls : oracle::table_classes(r)) rows.push_back({cls, oracle::closed_form_tables(level, r, cls), 0});

  // Every star-block choice must reproduce the table of its class.
  const int free_bits = r - 1;
  for (unsigned mask = 0; mask < (1U << free_bits); ++mask) {
    std::vector<std::uint8_t> psi(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < free_bits; ++i) psi[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    const auto cls = oracle::classify_choice(r, psi);
    const auto q = quantize_star_block(level, r, psi);
    for (auto& row : rows) {
      if (row.cls != cls) continue;
      ++row.multiplicity;
      if (!(row.element == q)) {
        err << "table mismatch for class " << oracle::to_string(cls) << ": table " << row.element.to_string()
            << ", quantization " << q.to_string() << "\n";
        return kConsistencyFailure;
      }
    }
  }
  const auto power_check = power(FusionElement::basis(level, level.half()), r);
  if (!(rows.front().element == power_check)) {
    err << "power table mismatch: " << rows.front().element.to_string() << " vs " << power_check.to_string() << "\n";
    return kConsistencyFailure;
  }

  switch (fmt) {
    case Format::Json: {
      Json arr = Json::array();
      for (const auto& row : rows) {
        Json j{{"class", oracle::to_string(row.cls)}};
        if (row.cls != oracle::TableClass::BasePower) j["choices"] = row.multiplicity;
        j["element"] = to_json(row.element);
        arr.push_back(std::move(j));
      }
      out << Json{{"level", k}, {"r", r}, {"tables", arr}}.dump() << "\n";
      break;
    }
    case Format::Csv:
      out << "r,level,class,choices";
      for (int m = 0; m <= k; ++m) out << ",c" << m;
      out << "\n";
      for (const auto& row : rows)
        out << r << "," << k << "," << oracle::to_string(row.cls) << "," << row.multiplicity << ","
            << join_coeffs(row.element) << "\n";
      break;
    case Format::Text:
      out << "r=" << r << " level " << k << "\n";
      for (const auto& row : rows) {
        out << std::left << std::setw(8) << oracle::to_string(row.cls);
        if (row.cls == oracle::TableClass::BasePower) {
          out << "            ";
        } else {
          out << "choices " << std::setw(4) << row.multiplicity;
        }
        out << row.element.to_string() << "\n";
      }
      break;
  }
  return kOk;
}

// --- verify -----------------------------------------------------------------

int verify(int max_k, int max_r, int max_h, double tolerance, Format fmt, std::ostream& out) {
  if (max_k < 0 || max_r < 0 || max_h < 0) throw UsageError("verify bounds must be non-negative");
  oracle::SuiteOptions options;
  options.tolerance = tolerance;
  const auto report = oracle::run_verification_suite(max_k, max_r, max_h, options);
  switch (fmt) {
    case Format::Json: out << to_json(report).dump() << "\n"; break;
    case Format::Csv:
      out << "name,params,pass,deviation,tolerance\n" << std::setprecision(6);
      for (const auto& c : report.checks)
        out << c.name << "," << c.params << "," << (c.pass ? "true" : "false") << "," << c.deviation << ","
            << c.tolerance << "\n";
      break;
    case Format::Text: {
      struct Summary {
        std::size_t count = 0, failed = 0;
        double worst = 0.0;
      };
      std::vector<std::pair<std::string, Summary>> summary;
      for (const auto& c : report.checks) {
        auto it = std::find_if(summary.begin(), summary.end(), [&](const auto& p) { return p.first == c.name; });
        if (it == summary.end()) {
          summary.emplace_back(c.name, Summary{});
          it = summary.end() - 1;
        }
        ++it->second.count;
        if (!c.pass) ++it->second.failed;
        it->second.worst = std::max(it->second.worst, c.deviation);
      }
      out << std::setprecision(3);
      for (const auto& [name, s] : summary)
        out << (s.failed ? "FAIL " : "PASS ") << std::left << std::setw(26) << name << std::right << std::setw(6)
            << s.count << " checks  " << s.failed << " failed  max deviation " << s.worst << "\n";
      for (const auto& c : report.checks)
        if (!c.pass) out << "  failed " << c.name << " [" << c.params << "]: " << c.message << "\n";
      out << (report.pass() ? "all checks passed" : "verification FAILED") << " (" << report.checks.size()
          << " checks)\n";
      break;
    }
  }
  return report.pass() ? kOk : kConsistencyFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact quantization of moduli spaces of flat SO(3)-bundles in the level-k fusion ring"};
  app.name("verlinde");
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };

  int level = 0;
  int genus = 0;
  std::string labels;

  auto* fusion = app.add_subcommand("fusion", "Fusion ring arithmetic");
  fusion->require_subcommand(1);
  auto* mult = fusion->add_subcommand("mult", "Multiply two elements given by tau coefficients");
  std::string a_text, b_text;
  mult->add_option("--level", level, "Level k")->required();
  mult->add_option("--a", a_text, "Comma separated tau coefficients")->required();
  mult->add_option("--b", b_text, "Comma separated tau coefficients")->required();
  add_format(mult);
  add_format(fusion);

  auto* sm = app.add_subcommand("smatrix", "Print the level-k S-matrix");
  sm->add_option("--level", level, "Level k")->required();
  add_format(sm);

  auto* pq = app.add_subcommand("prequant", "Check the pre-quantization conditions");
  pq->add_option("--level", level, "Level k")->required();
  pq->add_option("--genus", genus, "Genus h");
  pq->add_option("--labels", labels, "Comma separated boundary labels m_j");
  add_format(pq);

  auto* qz = app.add_subcommand("quantize", "Compute Q(M) in the fusion ring");
  std::string psi_text;
  bool all_choices = false;
  bool with_reduced = false;
  std::string path = "closed";
  qz->add_option("--level", level, "Level k")->required();
  qz->add_option("--genus", genus, "Genus h");
  qz->add_option("--labels", labels, "Comma separated boundary labels m_j");
  auto* psi_opt = qz->add_option("--psi", psi_text, "psi bits in slot order (boundary slots, then double slots)");
  qz->add_flag("--all-choices", all_choices, "Quantize every pre-quantization")->excludes(psi_opt);
  qz->add_option("--path", path, "closed, fs or both")->check(CLI::IsMember({"closed", "fs", "both"}));
  qz->add_flag("--reduced", with_reduced, "Also evaluate the scalar formula for Q(M//SU(2))");
  add_format(qz);

  auto* tb = app.add_subcommand("tables", "Print the multiplicity tables for r = 2, 3, 4 star classes");
  int r = 2;
  tb->add_option("--r", r, "Number of star classes")->required()->check(CLI::IsMember({2, 3, 4}));
  tb->add_option("--level", level, "Level k")->required();
  add_format(tb);

  auto* vf = app.add_subcommand("verify", "Run the verification sweep");
  int max_k = 20, max_r = 5, max_h = 2;
  vf->add_option("--max-level", max_k, "Largest level");
  vf->add_option("--max-r", max_r, "Largest number of star classes");
  vf->add_option("--max-genus", max_h, "Largest genus");
  add_format(vf);

  std::vector<const char*> argv{"verlinde"};
  for (const auto& a : args) argv.push_back(a.c_str());

  std::ostringstream buffer;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  }

  int code = kOk;
  try {
    const Format fmt = parse_format(format);
    const double tolerance = read_tolerance();
    auto surface = [&] {
      if (genus < 0) throw UsageError("--genus must be non-negative");
      return SurfaceData{make_level(level), genus, parse_ints(labels, "label")};
    };
    if (mult->parsed()) {
      fusion_mult(level, a_text, b_text, fmt, buffer);
    } else if (sm->parsed()) {
      smatrix(level, fmt, buffer);
    } else if (pq->parsed()) {
      code = prequant(surface(), fmt, buffer);
    } else if (qz->parsed()) {
      code = quantize(surface(), psi_text, all_choices, path, with_reduced, tolerance, fmt, buffer, err);
    } else if (tb->parsed()) {
      code = tables(r, level, fmt, buffer, err);
    } else if (vf->parsed()) {
      code = verify(max_k, max_r, max_h, tolerance, fmt, buffer);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NotAdmissible& e) {
    err << e.what() << "\n";
    return kNotAdmissible;
  } catch (const ConsistencyError& e) {
    err << "internal consistency failure: " << e.what() << "\n";
    return kConsistencyFailure;
  } catch (const GroupTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  out << buffer.str();
  return code;
}

}  // namespace verlinde::cli
