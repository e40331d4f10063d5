#pragma once

#include <string>

#include <json.hpp>

#include "condlp/condition.hpp"

namespace condlp {

// {"form": int, "A": [[real]], "b": [real], "c": [real]}; b and c may be omitted for form 4.
// Errors are InvalidInput naming the offending field.
CanonicalInstance parse_instance(const nlohmann::json& j);
CanonicalInstance parse_instance_text(const std::string& text);
CanonicalInstance load_instance(const std::string& path);

nlohmann::ordered_json instance_to_json(const CanonicalInstance& inst);

// Non-finite numbers become the strings "inf", "-inf", "nan".
nlohmann::ordered_json json_number(double x);

nlohmann::ordered_json to_json(const RhoInterval& rho);
nlohmann::ordered_json to_json(const ConditionPart& part);
nlohmann::ordered_json to_json(const ConditionInterval& ci);

void write_text(const std::string& path, const std::string& text);

}  // namespace condlp
