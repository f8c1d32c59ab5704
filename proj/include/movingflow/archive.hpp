#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "movingflow/mesh.hpp"
#include "movingflow/report.hpp"

namespace mf {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Rows: slice,step,t,node,x,u.
std::string fields_csv(const SpaceTimeField& field);
SpaceTimeField parse_fields_csv(const std::string& text);

// "MFLOWBIN" + uint32 version + uint32 reserved, then little-endian float64 payload.
std::vector<unsigned char> fields_bin(const SpaceTimeField& field);
SpaceTimeField parse_fields_bin(const std::vector<unsigned char>& bytes);

nlohmann::json report_to_json(const EstimateReport& rep);
EstimateReport report_from_json(const nlohmann::json& j);

std::string dump_json(const nlohmann::json& j);

}  // namespace mf
