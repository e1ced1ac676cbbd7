#include "pidtune/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pidtune {

std::string format_full(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_response_csv(const std::filesystem::path& path, const StepResponse& resp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,r,y\n";
  for (std::size_t i = 0; i < resp.times.size(); ++i) {
    out << format_full(resp.times[i]) << ',' << format_full(resp.setpoint) << ','
        << format_full(resp.outputs[i]) << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<double>& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iteration,best_fitness\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << i << ',' << format_full(history[i]) << '\n';
  }
}

ResponseCsv read_response_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  ResponseCsv csv;
  std::string line;
  if (!std::getline(in, line) || line != "t,r,y") {
    throw std::runtime_error(path.string() + ": expected header t,r,y");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double values[3];
    for (double& v : values) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error(path.string() + ": short row");
      }
      v = std::stod(cell);
    }
    csv.times.push_back(values[0]);
    csv.setpoints.push_back(values[1]);
    csv.outputs.push_back(values[2]);
  }
  return csv;
}

}  // namespace pidtune
