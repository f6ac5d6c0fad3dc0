#pragma once

#include <string>

#include "json.hpp"

#include "sumfree/construction.hpp"
#include "sumfree/errors.hpp"

namespace sumfree {

using Json = nlohmann::ordered_json;

// Input that does not match the triple-set schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json report_to_json(const PipelineReport& report);
PipelineReport report_from_json(const nlohmann::json& j);

// {"q", "n", "target", "triples": [{"a", "b", "c"}, ...], "report": {...}}.
// "report" is omitted when `report` is null. Big counts are decimal strings.
Json triple_set_to_json(const TripleSet& ts, const PipelineReport* report = nullptr);
TripleSet triple_set_from_json(const nlohmann::json& j);

// Serialized form as written to disk: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace sumfree
