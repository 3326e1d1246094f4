#include "hkt/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hkt {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json config_json(const SolverConfig& cfg) {
  Json j = Json::object();
  const Config c = cfg.to_config();
  for (const auto& [key, value] : c.entries()) j[key] = value;
  return j;
}

Json cone_json(const ConeConditionReport& c) {
  return Json{{"holds", c.holds},
              {"min_margin", num(c.min_margin)},
              {"delta", num(c.delta)},
              {"worst_point", c.worst_point},
              {"worst_index", c.worst_index}};
}

Json cone_field_json(const ConeFieldReport& c) {
  return Json{{"inside", c.inside},
              {"min_slack", num(c.min_slack)},
              {"worst_point", c.worst_point},
              {"worst_order", c.worst_order}};
}

Json slack_json(const std::vector<SlackRecord>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back({{"i", r.i}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"slack", num(r.slack)}});
  return a;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string verification_json(const std::vector<VerificationReport>& reports) {
  Json list = Json::array();
  bool passed = true;
  for (const auto& r : reports) {
    passed = passed && r.passed();
    list.push_back({{"proposition", r.proposition},
                    {"n", r.spec.n},
                    {"k", r.spec.k},
                    {"count", r.spec.count},
                    {"seed", r.spec.seed},
                    {"scale", r.spec.scale},
                    {"samples", r.samples},
                    {"checks", r.checks},
                    {"failures", r.failures},
                    {"worst_margin", num(r.worst_margin)},
                    {"min_slack", num(r.min_slack)},
                    {"passed", r.passed()}});
  }
  return dump(Json{{"margin", kStrictnessMargin}, {"passed", passed}, {"reports", list}});
}

std::string solve_summary_json(const SolverConfig& cfg, const SolveResult& r, const std::string& status) {
  Json history = Json::array();
  for (double v : r.residual_history) history.push_back(num(v));
  Json steps = Json::array();
  for (double v : r.step_lengths) steps.push_back(num(v));
  Json j{{"status", status},
         {"converged", r.converged},
         {"config", config_json(cfg)},
         {"b", num(r.b)},
         {"iterations", r.iterations},
         {"final_residual", r.residual_history.empty() ? Json(nullptr) : num(r.residual_history.back())},
         {"residual_history", history},
         {"linear_iterations", r.linear_iterations},
         {"step_lengths", steps},
         {"u_min", r.u.values.empty() ? Json(nullptr) : num(r.u.min())},
         {"u_max", r.u.values.empty() ? Json(nullptr) : num(r.u.max())},
         {"cone", cone_field_json(r.cone)},
         {"ellipticity", num(r.ellipticity)},
         {"cone_condition_initial", cone_json(r.cone_condition_initial)},
         {"cone_condition_final", cone_json(r.cone_condition_final)},
         {"continuation", r.continuation},
         {"warnings", r.warnings}};
  return dump(j);
}

std::string cone_check_json(const SolverConfig& cfg, double b, const ConeConditionReport& cone,
                            const ConeFieldReport& omega0_cone, const EpsilonMeasure& epsilon) {
  Json j{{"config", config_json(cfg)},
         {"b", num(b)},
         {"omega0_in_gamma_k", cone_field_json(omega0_cone)},
         {"epsilon_sup", num(epsilon.sup)},
         {"epsilon", num(epsilon.value)},
         {"cone_condition", cone_json(cone)}};
  return dump(j);
}

std::string probe_json(const ProbeReport& r) {
  Json cherrier = Json::array();
  for (const auto& c : r.cherrier) {
    cherrier.push_back({{"p", c.p},
                        {"E", num(c.energy)},
                        {"M", num(c.mass)},
                        {"C", num(c.ratio)},
                        {"log_shift", num(c.log_shift)},
                        {"displayed", num(c.displayed)}});
  }
  Json homotopy = Json::array();
  for (const auto& h : r.integrals.homotopy) {
    homotopy.push_back({{"p", h.p},
                        {"a", h.a},
                        {"epsilon", num(h.epsilon)},
                        {"pointwise", slack_json(h.pointwise)},
                        {"pointwise_single_epsilon", slack_json(h.displayed)},
                        {"weighted", slack_json(h.weighted)}});
  }
  Json energy = Json::array();
  for (const auto& e : r.integrals.energy) {
    energy.push_back({{"p", e.p},
                      {"lhs", num(e.lhs)},
                      {"gradient_term", num(e.gradient_term)},
                      {"mass", num(e.mass)},
                      {"c_min", num(e.c_min)},
                      {"c_ref", num(e.c_ref)},
                      {"slack", num(e.slack)},
                      {"identity_rhs", num(e.identity_rhs)},
                      {"identity_defect", num(e.identity_defect)}});
  }
  Json margins = Json::array();
  for (const auto& m : r.lemma.margins) {
    margins.push_back({{"name", m.name},
                       {"min_margin", num(m.min_margin)},
                       {"worst_t", m.worst_t},
                       {"worst_point", m.worst_point},
                       {"checks", m.checks},
                       {"failures", m.failures}});
  }
  Json j{{"problem_id", r.problem_id},
         {"n", r.n},
         {"k", r.k},
         {"l", r.l},
         {"b", num(r.b)},
         {"epsilon_sup", num(r.epsilon.sup)},
         {"epsilon", num(r.epsilon.value)},
         {"delta", num(r.delta)},
         {"cone_condition", r.cone_condition},
         {"cherrier", cherrier},
         {"cherrier_growth", num(r.cherrier_growth)},
         {"cherrier_bounded", r.cherrier_bounded},
         {"homotopy", homotopy},
         {"weighted_energy", energy},
         {"lemma",
          {{"delta_sup", num(r.lemma.delta_sup)},
           {"delta", num(r.lemma.delta)},
           {"delta_effective", num(r.lemma.delta_effective)},
           {"best_constant", num(r.lemma.best_constant)},
           {"passed", r.lemma.passed()},
           {"margins", margins}}},
         {"mandatory_passed", r.mandatory_passed()}};
  return dump(j);
}

std::string cherrier_csv(const ProbeReport& r) {
  std::string out = "p,E,M,C\n";
  char line[128];
  for (const auto& c : r.cherrier) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", c.p, c.energy, c.mass, c.ratio);
    out += line;
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace hkt
