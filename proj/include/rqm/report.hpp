#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "rqm/bones.hpp"
#include "rqm/entropy.hpp"
#include "rqm/json.hpp"

namespace rqm {

void write_json(JsonWriter& js, const EntropyEstimate& e);
void write_json(JsonWriter& js, const PCFPoint& p, const std::optional<PositiveDirectionReport>& dir = std::nullopt);
void write_json(JsonWriter& js, const PositiveDirectionReport& r);
void write_json(JsonWriter& js, const Bone& b);
void write_json(JsonWriter& js, const Window& w);

/// {"window": ..., "points": [...]} with the positive-direction report of each point.
void write_pcf_json(std::ostream& os, const Window& w, const std::vector<PCFPoint>& points);
/// {"window": ..., "bones": [...]}.
void write_bones_json(std::ostream& os, const Window& w, const std::vector<Bone>& bones);

}  // namespace rqm
