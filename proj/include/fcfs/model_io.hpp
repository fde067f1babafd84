#pragma once

#include <filesystem>
#include <string>

#include "fcfs/model.hpp"
#include "json.hpp"

namespace fcfs {

/// Malformed model file (bad JSON, missing keys, wrong value types).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorCode::InvalidModel, message) {}
};

ModelSpec model_spec_from_json(const nlohmann::json& doc);
ModelSpec parse_model_text(const std::string& text);
ModelSpec load_model_spec(const std::filesystem::path& path);

/// Parse and validate in one step.
MatchingModel load_model(const std::filesystem::path& path);

nlohmann::json to_json(const ModelSpec& spec);
inline nlohmann::json to_json(const MatchingModel& model) { return to_json(model.spec()); }

}  // namespace fcfs
