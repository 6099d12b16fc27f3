#include "translab/report.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "translab/field_io.hpp"

namespace translab {

void write_audit_csv(std::ostream& os, const std::vector<AuditRow>& rows) {
  os << "name,inputs_hash,metric,tolerance,pass\n";
  for (const AuditRow& r : rows)
    os << r.name << ',' << r.inputs_hash << ',' << format_double(r.metric) << ','
       << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical(const nlohmann::json& j) { return j.dump(); }

std::string content_hash(const nlohmann::json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical(j))));
  return buf;
}

nlohmann::json to_json(const SolverSettings& s) {
  return {{"tol", s.tol},
          {"max_iter", s.max_iter},
          {"max_halvings", s.max_halvings},
          {"linear_tol", s.linear_tol}};
}

nlohmann::json to_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"residual_history", r.residual_history},
          {"step_lengths", r.step_lengths},
          {"linear_residuals", r.linear_residuals},
          {"message", r.message}};
}

nlohmann::json to_json(const BarrierSpec& spec) {
  if (const auto* e = std::get_if<barrier::Exp>(&spec))
    return {{"kind", "exp"}, {"constants", {{"mu", e->mu}}}};
  if (const auto* b = std::get_if<barrier::Bessel>(&spec))
    return {{"kind", "bessel"}, {"constants", {{"alpha", b->alpha}}}};
  const auto& c = std::get<barrier::Composite>(spec);
  return {{"kind", "composite"},
          {"constants",
           {{"c1", c.c1}, {"c2", c.c2}, {"eps", c.eps}, {"n", c.n}, {"alpha", c.bessel.alpha}}}};
}

BarrierSpec barrier_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto& c = j.at("constants");
  BarrierSpec spec;
  if (kind == "exp")
    spec = barrier::Exp{c.at("mu").get<double>()};
  else if (kind == "bessel")
    spec = barrier::Bessel{c.at("alpha").get<double>()};
  else if (kind == "composite")
    spec = barrier::Composite{c.at("c1").get<double>(), c.at("c2").get<double>(),
                              c.at("eps").get<double>(), c.at("n").get<double>(),
                              barrier::Bessel{c.at("alpha").get<double>()}};
  else
    throw std::invalid_argument("unknown barrier kind '" + kind + "'");
  validate(spec);
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

nlohmann::json to_json(const Manifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"config_hash", content_hash(m.config)},
          {"version", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"tolerances", m.tolerances},
          {"outputs", m.outputs},
          {"exit_code", m.exit_code}};
}

}  // namespace translab
