#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pidtune/sim.hpp"

namespace pidtune {

/// Shortest-exact decimal formatting (17 significant digits) so CSV output
/// re-parses to bit-identical doubles.
std::string format_full(double value);

/// Header `t,r,y`, one row per sample.
void write_response_csv(const std::filesystem::path& path, const StepResponse& resp);

/// Header `iteration,best_fitness`.
void write_convergence_csv(const std::filesystem::path& path, const std::vector<double>& history);

struct ResponseCsv {
  std::vector<double> times;
  std::vector<double> setpoints;
  std::vector<double> outputs;
};

ResponseCsv read_response_csv(const std::filesystem::path& path);

}  // namespace pidtune
