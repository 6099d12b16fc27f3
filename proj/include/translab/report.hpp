// report.hpp
//
// Audit rows, JSON serialisation of reports and settings, content hashes and
// the per-run manifest.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "translab/barriers.hpp"
#include "translab/solver.hpp"

namespace translab {

inline constexpr const char* kVersion = "1.0.0";

struct AuditRow {
  std::string name;
  std::string inputs_hash;
  double metric = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

void write_audit_csv(std::ostream& os, const std::vector<AuditRow>& rows);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lower-case hex digits of fnv1a64 over the canonical JSON text.
std::string content_hash(const nlohmann::json& j);
/// Keys sorted, no whitespace; doubles round-trip exactly.
std::string canonical(const nlohmann::json& j);

nlohmann::json to_json(const SolverSettings& s);
nlohmann::json to_json(const SolveReport& r);  // fields are written separately
nlohmann::json to_json(const BarrierSpec& spec);
BarrierSpec barrier_from_json(const nlohmann::json& j);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

struct Manifest {
  std::string command;
  nlohmann::json config;
  nlohmann::json tolerances;
  std::vector<std::string> outputs;
  int exit_code = 0;
};

nlohmann::json to_json(const Manifest& m);

}  // namespace translab
