#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pidtune/lti.hpp"
#include "pidtune/rng.hpp"

namespace pidtune {

/// Closed search intervals for the three gains.
struct GainRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct GainRanges {
  GainRange kp{0.0, 0.2};
  GainRange ki{0.0, 0.02};
  GainRange kd{0.0, 4.0};
};

void validate(const GainRanges& ranges);

/// Fixed-width bitstring of length 3W: three W-bit fields in the order
/// kp | ki | kd, most significant bit first within each field.
struct Genome {
  std::vector<std::uint8_t> bits;  // each element is 0 or 1

  std::size_t size() const { return bits.size(); }
  bool operator==(const Genome&) const = default;
};

Genome random_genome(std::size_t length, Rng& rng);
std::size_t popcount(const Genome& genome);
std::string to_string(const Genome& genome);

struct EvoaConfig {
  int w_bits = 16;            // W: bits per gain field
  int population = 20;        // N
  int max_iterations = 200;   // T
  int pebble_max = 6;         // L upper bound; defaulted from W by default_pebble_max
  std::uint64_t rng_seed = 1;
  GainRanges ranges;

  std::size_t genome_length() const { return 3 * static_cast<std::size_t>(w_bits); }
};

int default_pebble_max(int w_bits);
void validate(const EvoaConfig& config);

struct Candidate {
  Genome genome;
  std::optional<double> fitness;
};

/// Fixed-point quantization of the gains onto the 3W-bit genome. Values
/// outside their range are clamped first; `clamped`, when supplied, reports
/// whether that happened.
Genome encode(const PidGains& gains, const GainRanges& ranges, int w_bits,
              bool* clamped = nullptr);

/// Inverse of encode up to quantization: lo + code/(2^W - 1) * (hi - lo)
/// per field. Throws on a length mismatch.
PidGains decode(const Genome& genome, const GainRanges& ranges, int w_bits);

// Deterministic kernels behind the stochastic operators; exposed so the
// involution and permutation properties can be tested directly.
Genome apply_xor_segment(const Genome& genome, std::size_t position,
                         std::span<const std::uint8_t> mask);
Genome rotate_bits(const Genome& genome, std::size_t shift, bool left);
Genome flip_bits(const Genome& genome, std::span<const std::size_t> positions);

/// Tossing of pebbles: XOR a random-length segment at a random position
/// with fresh random bits, truncated at the genome end.
Genome toss_pebbles(const Genome& genome, int pebble_max, Rng& rng);

/// Rolling of the solution: circular rotation of the whole bitstring by a
/// random nonzero shift in a random direction.
Genome roll_solution(const Genome& genome, Rng& rng);

/// Change of tossing angle: flip a random number of distinct random bits.
Genome change_angle(const Genome& genome, int pebble_max, Rng& rng);

struct OptimizeResult {
  Candidate best;
  std::vector<double> history;  // best-so-far fitness; [0] is the initial population
  std::uint64_t evaluations = 0;
};

/// Greedy population search: each iteration every member goes through
/// toss -> roll -> change-angle as one composite move, is re-evaluated once,
/// and keeps the move only on strict improvement. The global best is
/// tracked across all evaluations. Fitness must be finite everywhere;
/// a non-finite value throws DomainError naming the offending genome.
OptimizeResult optimize(const EvoaConfig& config, const std::optional<Genome>& seed_candidate,
                        const std::function<double(const Genome&)>& fitness);

}  // namespace pidtune
