#pragma once

// JSON encodings. Integer coefficients that do not fit a double exactly
// (|c| > 2^53) are written as decimal strings; readers accept both forms.

#include <json.hpp>

#include "verlinde/fusion_ring.hpp"
#include "verlinde/oracle.hpp"
#include "verlinde/prequant.hpp"
#include "verlinde/quant.hpp"

namespace verlinde {

using Json = nlohmann::ordered_json;

Json integer_to_json(const Integer& value);
Integer integer_from_json(const Json& j);

Json to_json(const FusionElement& element);
FusionElement fusion_element_from_json(const Json& j);

Json to_json(const SurfaceData& surface);
SurfaceData surface_from_json(const Json& j);

Json to_json(const PrequantChoice& choice);
PrequantChoice choice_from_json(const Json& j);

Json to_json(const QuantizationResult& result);
QuantizationResult quantization_result_from_json(const Json& j);

Json to_json(const AdmissibilityReport& report);

Json to_json(const oracle::VerificationReport& report);

}  // namespace verlinde
