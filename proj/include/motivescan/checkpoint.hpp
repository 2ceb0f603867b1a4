#pragma once

#include <string>

#include "motivescan/model.hpp"

namespace motivescan {

// Text checkpoint format. First line is the header "MOTIVE-MODEL v1",
// followed by key=value metadata, a blank line, then one block per tensor:
// name line, "rows cols" shape line, row-major values (shortest round-trip
// decimals, one row per line), blank line. load(save(p)) == p exactly.

std::string serialize_model(const ModelParams& params);
ModelParams deserialize_model(const std::string& text);

void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

// 16-hex-digit digest of the serialized checkpoint; identifies the exact
// parameter values so downstream artifacts can be checked for consistency.
std::string model_fingerprint(const ModelParams& params);

}  // namespace motivescan
