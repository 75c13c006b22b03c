#pragma once

#include <filesystem>
#include <string>

#include "bcamo/camo.hpp"

namespace bcamo {

std::string target_set_to_json(const TargetSet& t);
TargetSet target_set_from_json(const std::string& text);
void save_target_set(const std::filesystem::path& path, const TargetSet& t);
TargetSet load_target_set(const std::filesystem::path& path);

/// Attacker-visible description of the camouflaged cells: candidate nets and
/// function options by name, without the true choices.
std::string camo_public_json(const CamoNetlist& c);

/// The true choices. Marked SECRET; never part of attacker-facing exports.
std::string camo_secret_json(const CamoNetlist& c);

/// Rebuilds a CamoNetlist from its base netlist and sidecars. Without a
/// secret, every true index is left at 0.
CamoNetlist camo_from_json(const Netlist& base, const std::string& public_json, const std::string* secret_json);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bcamo
