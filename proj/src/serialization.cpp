#include "verlinde/serialization.hpp"

#include <stdexcept>

namespace verlinde {

namespace {

const Integer& max_exact() {
  static const Integer limit = Integer(1) << 53;
  return limit;
}

std::vector<std::uint8_t> bits_from_json(const Json& j) {
  std::vector<std::uint8_t> bits;
  for (const auto& b : j) {
    const int v = b.get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument("bit vectors may only contain 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(v));
  }
  return bits;
}

}  // namespace

Json integer_to_json(const Integer& value) {
  if (abs(value) <= max_exact()) return value.convert_to<long long>();
  return value.str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_number_unsigned()) return Integer(j.get<unsigned long long>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw std::invalid_argument("not a decimal integer: '" + s + "'");
    return Integer(s);
  }
  throw std::invalid_argument("expected an integer or a decimal string");
}

Json to_json(const FusionElement& element) {
  Json coeffs = Json::array();
  for (const auto& c : element.coeffs()) coeffs.push_back(integer_to_json(c));
  return Json{{"level", element.level().k()}, {"coeffs", std::move(coeffs)}};
}

FusionElement fusion_element_from_json(const Json& j) {
  const Level level(j.at("level").get<int>());
  std::vector<Integer> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(integer_from_json(c));
  return FusionElement(level, std::move(coeffs));
}

Json to_json(const SurfaceData& surface) {
  return Json{{"level", surface.level.k()}, {"genus", surface.genus}, {"labels", surface.labels}};
}

SurfaceData surface_from_json(const Json& j) {
  SurfaceData s{Level(j.at("level").get<int>()), j.value("genus", 0), {}};
  if (s.genus < 0) throw std::invalid_argument("genus must be non-negative");
  if (j.contains("labels")) s.labels = j.at("labels").get<std::vector<int>>();
  return s;
}

Json to_json(const PrequantChoice& choice) {
  Json bits = Json::array();
  for (auto b : choice.psi_bits) bits.push_back(static_cast<int>(b));
  return Json{{"psi_bits", std::move(bits)}};
}

PrequantChoice choice_from_json(const Json& j) { return PrequantChoice{bits_from_json(j.at("psi_bits"))}; }

Json to_json(const QuantizationResult& result) {
  Json j = to_json(result.element);
  j["reduced"] = integer_to_json(result.reduced);
  j["path"] = to_string(result.path);
  j["choice"] = result.choice ? to_json(*result.choice) : Json(nullptr);
  return j;
}

QuantizationResult quantization_result_from_json(const Json& j) {
  QuantizationResult r{fusion_element_from_json(j), integer_from_json(j.at("reduced")),
                       parse_quant_path(j.at("path").get<std::string>()), std::nullopt};
  if (j.contains("choice") && !j.at("choice").is_null()) r.choice = choice_from_json(j.at("choice"));
  if (r.reduced != trace(r.element)) throw std::invalid_argument("reduced value does not match trace of coeffs");
  return r;
}

Json to_json(const AdmissibilityReport& report) {
  Json conditions = Json::array();
  for (const auto& c : report.conditions)
    conditions.push_back(
        Json{{"condition", condition_label(c.condition)}, {"holds", c.holds}, {"description", c.description}});
  Json j{{"admissible", report.admissible()}, {"conditions", std::move(conditions)}};
  if (!report.admissible()) j["reason"] = report.failure_reason();
  return j;
}

Json to_json(const oracle::VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e{{"name", c.name}, {"params", c.params}, {"pass", c.pass}, {"deviation", c.deviation},
           {"tolerance", c.tolerance}};
    if (!c.message.empty()) e["message"] = c.message;
    checks.push_back(std::move(e));
  }
  return Json{{"checks", std::move(checks)}, {"pass", report.pass()}};
}

}  // namespace verlinde
