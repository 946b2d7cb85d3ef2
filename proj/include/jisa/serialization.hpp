#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "jisa/compatibility.hpp"
#include "jisa/coordinator.hpp"
#include "jisa/puzzle.hpp"
#include "jisa/reconstruction.hpp"
#include "jisa/trim_fill.hpp"

namespace jisa {

using nlohmann::json;

void to_json(json& j, const Cell& c);
void from_json(const json& j, Cell& c);
void to_json(json& j, const EdgeConfig& e);
void from_json(const json& j, EdgeConfig& e);
void to_json(json& j, const OccupiedCell& oc);
void from_json(const json& j, OccupiedCell& oc);
void to_json(json& j, const TrimFrame& f);
void from_json(const json& j, TrimFrame& f);

// {pieces:[{id,row,col,rot}], rows, cols, P}
void to_json(json& j, const Placement& p);
void from_json(const json& j, Placement& p);

void to_json(json& j, const StepEvent& e);
void to_json(json& j, const CoordinatorRecord& r);

StepKind step_kind_from(const std::string& name);
GateOutcome gate_outcome_from(const std::string& name);
TrimOutcome trim_outcome_from(const std::string& name);

// Throws InputError on unreadable or malformed JSON.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& value);

// Binary table cache keyed by the scrambled piece set's hash.
void save_table(const std::filesystem::path& path, const CompatibilityTable& table, const std::string& key);
// nullopt if the file is missing or was written for a different key.
std::optional<CompatibilityTable> load_table(const std::filesystem::path& path, const std::string& key);

}  // namespace jisa
