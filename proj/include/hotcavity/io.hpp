#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hotcavity/motion.hpp"
#include "hotcavity/oracles.hpp"
#include "hotcavity/scaling.hpp"
#include "hotcavity/semiclassical.hpp"

namespace hotcavity::io {

using nlohmann::json;

std::string fmt(double v);

// Column name with its unit label, e.g. "F[hbar*k*kappa]".
std::string labelled(const std::string& column);

// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(const std::string& content);

json to_json(const SystemParams& p);
json to_json(const MotionOptions& m);
json to_json(const SweepSpec& s);
json to_json(const OracleReport& r);

std::string table_csv(const SweepTable& t);
std::string trajectory_csv(const Trajectory& traj, const SystemParams& p);
std::string profile_csv(const SystemParams& p, const std::vector<double>& theta);
std::string coeffs_csv(const SystemParams& p, const std::vector<double>& theta, const MotionOptions& opt);

// Writes <dir>/<stem>.csv and <dir>/<stem>.meta.json; meta gains the csv hash.
void write_csv_with_meta(const std::filesystem::path& dir, const std::string& stem, const std::string& csv,
                         json meta);

json load_json(const std::filesystem::path& path);

// Flat JSON object of parameter names to numbers (strings kept for mode names).
json load_config(const std::filesystem::path& path);

}  // namespace hotcavity::io
