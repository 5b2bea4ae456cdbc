#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ordmed/instance.hpp"

namespace ordmed {

using Json = nlohmann::ordered_json;

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& q);

/// Parses and validates an instance document.
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& inst);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

Json solution_to_json(const Instance& inst, const Solution& sol);

}  // namespace ordmed
