#pragma once

#include <string>
#include <vector>

#include "hkt/oracle.hpp"
#include "hkt/probe.hpp"
#include "hkt/solver.hpp"

namespace hkt {

// JSON documents written by the command-line tool. Non-finite numbers are
// written as null. Output is deterministic for identical inputs.
std::string verification_json(const std::vector<VerificationReport>& reports);
// `status` is "converged" or the failure message.
std::string solve_summary_json(const SolverConfig& cfg, const SolveResult& result, const std::string& status);
std::string cone_check_json(const SolverConfig& cfg, double b, const ConeConditionReport& cone,
                            const ConeFieldReport& omega0_cone, const EpsilonMeasure& epsilon);
std::string probe_json(const ProbeReport& report);
// Columns p,E,M,C, one row per probed p.
std::string cherrier_csv(const ProbeReport& report);

void write_text(const std::string& path, const std::string& text);

}  // namespace hkt
