#pragma once

// Canonical JSON and plaintext renderings of verifier output. Identical
// schemas give byte-identical renderings.

#include <string>

#include <nlohmann/json.hpp>

#include "nsub/verifier.hpp"

namespace nsub {

std::string_view to_string(Claim claim);

nlohmann::json to_json(const CollapseCertificate& cert, const std::string& schema_digest);
nlohmann::json to_json(const PairsReport& report);
nlohmann::json to_json(const PartitionsReport& report);
nlohmann::json to_json(const RequirementReport& report);
nlohmann::json to_json(const TightnessReport& report);

std::string render_text(const PairsReport& report);
std::string render_text(const PartitionsReport& report);
std::string render_text(const RequirementReport& report);
std::string render_text(const TightnessReport& report);

}  // namespace nsub
