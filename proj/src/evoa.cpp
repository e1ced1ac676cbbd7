#include "pidtune/evoa.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pidtune/errors.hpp"

namespace pidtune {

namespace {

void check_range(const GainRange& range, const char* name) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo < 0.0 ||
      !(range.hi > range.lo)) {
    throw std::invalid_argument(std::string("gain range ") + name +
                                " must satisfy 0 <= lo < hi (finite)");
  }
}

double clamp_into(double value, const GainRange& range, bool* clamped) {
  if (value < range.lo) {
    if (clamped) *clamped = true;
    return range.lo;
  }
  if (value > range.hi) {
    if (clamped) *clamped = true;
    return range.hi;
  }
  return value;
}

std::uint64_t field_code(const Genome& genome, std::size_t field, int w_bits) {
  std::uint64_t code = 0;
  const std::size_t base = field * static_cast<std::size_t>(w_bits);
  for (int b = 0; b < w_bits; ++b) {
    code = (code << 1) | genome.bits[base + static_cast<std::size_t>(b)];
  }
  return code;
}

void store_field(Genome& genome, std::size_t field, int w_bits, std::uint64_t code) {
  const std::size_t base = field * static_cast<std::size_t>(w_bits);
  for (int b = 0; b < w_bits; ++b) {
    genome.bits[base + static_cast<std::size_t>(b)] =
        static_cast<std::uint8_t>((code >> (w_bits - 1 - b)) & 1u);
  }
}

}  // namespace

void validate(const GainRanges& ranges) {
  check_range(ranges.kp, "kp");
  check_range(ranges.ki, "ki");
  check_range(ranges.kd, "kd");
}

int default_pebble_max(int w_bits) { return std::max(1, 3 * w_bits / 8); }

void validate(const EvoaConfig& config) {
  if (config.w_bits < 1 || config.w_bits > 32) {
    throw std::invalid_argument("evoa: w_bits must be in [1, 32]");
  }
  if (config.population < 1) {
    throw std::invalid_argument("evoa: population must be at least 1");
  }
  if (config.max_iterations < 0) {
    throw std::invalid_argument("evoa: max_iterations must be non-negative");
  }
  if (config.pebble_max < 1 || config.pebble_max > 3 * config.w_bits) {
    throw std::invalid_argument("evoa: pebble_max must be in [1, 3*w_bits]");
  }
  validate(config.ranges);
}

Genome random_genome(std::size_t length, Rng& rng) {
  Genome genome;
  genome.bits.resize(length);
  for (auto& bit : genome.bits) bit = rng.coin() ? 1 : 0;
  return genome;
}

std::size_t popcount(const Genome& genome) {
  return static_cast<std::size_t>(
      std::accumulate(genome.bits.begin(), genome.bits.end(), std::size_t{0}));
}

std::string to_string(const Genome& genome) {
  std::string s;
  s.reserve(genome.size());
  for (auto bit : genome.bits) s.push_back(bit ? '1' : '0');
  return s;
}

Genome encode(const PidGains& gains, const GainRanges& ranges, int w_bits, bool* clamped) {
  validate(ranges);
  if (clamped) *clamped = false;
  const std::uint64_t full = (w_bits >= 64) ? ~0ull : ((1ull << w_bits) - 1ull);

  Genome genome;
  genome.bits.assign(3 * static_cast<std::size_t>(w_bits), 0);
  const GainRange* range_of[3] = {&ranges.kp, &ranges.ki, &ranges.kd};
  const double values[3] = {gains.kp, gains.ki, gains.kd};
  for (std::size_t field = 0; field < 3; ++field) {
    const GainRange& range = *range_of[field];
    const double v = clamp_into(values[field], range, clamped);
    const double scaled = (v - range.lo) / (range.hi - range.lo) * static_cast<double>(full);
    store_field(genome, field, w_bits, static_cast<std::uint64_t>(std::llround(scaled)));
  }
  return genome;
}

PidGains decode(const Genome& genome, const GainRanges& ranges, int w_bits) {
  validate(ranges);
  if (genome.size() != 3 * static_cast<std::size_t>(w_bits)) {
    throw std::invalid_argument("decode: genome length does not match 3*w_bits");
  }
  const double full = static_cast<double>((w_bits >= 64) ? ~0ull : ((1ull << w_bits) - 1ull));
  const GainRange* range_of[3] = {&ranges.kp, &ranges.ki, &ranges.kd};
  double values[3];
  for (std::size_t field = 0; field < 3; ++field) {
    const GainRange& range = *range_of[field];
    const double code = static_cast<double>(field_code(genome, field, w_bits));
    values[field] = range.lo + code / full * (range.hi - range.lo);
  }
  return PidGains{values[0], values[1], values[2]};
}

Genome apply_xor_segment(const Genome& genome, std::size_t position,
                         std::span<const std::uint8_t> mask) {
  Genome result = genome;
  for (std::size_t i = 0; i < mask.size() && position + i < result.size(); ++i) {
    result.bits[position + i] ^= (mask[i] & 1u);
  }
  return result;
}

Genome rotate_bits(const Genome& genome, std::size_t shift, bool left) {
  const std::size_t n = genome.size();
  if (n == 0) return genome;
  shift %= n;
  if (shift == 0) return genome;
  Genome result = genome;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t from = left ? (i + shift) % n : (i + n - shift) % n;
    result.bits[i] = genome.bits[from];
  }
  return result;
}

Genome flip_bits(const Genome& genome, std::span<const std::size_t> positions) {
  Genome result = genome;
  for (std::size_t p : positions) {
    if (p >= result.size()) throw std::invalid_argument("flip_bits: position out of range");
    result.bits[p] ^= 1u;
  }
  return result;
}

Genome toss_pebbles(const Genome& genome, int pebble_max, Rng& rng) {
  const std::size_t n = genome.size();
  const std::size_t position = rng.below(n);
  const std::size_t length = rng.between(1, static_cast<std::uint64_t>(pebble_max));
  std::vector<std::uint8_t> mask(length);
  for (auto& bit : mask) bit = rng.coin() ? 1 : 0;
  return apply_xor_segment(genome, position, mask);
}

Genome roll_solution(const Genome& genome, Rng& rng) {
  const std::size_t n = genome.size();
  const bool left = rng.coin();
  const std::size_t shift = rng.between(1, n - 1);
  return rotate_bits(genome, shift, left);
}

Genome change_angle(const Genome& genome, int pebble_max, Rng& rng) {
  const std::size_t n = genome.size();
  const std::size_t count = rng.between(1, static_cast<std::uint64_t>(pebble_max));
  // Partial Fisher-Yates over an index scratch to draw distinct positions.
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(indices[i], indices[j]);
  }
  return flip_bits(genome, std::span<const std::size_t>(indices.data(), count));
}

OptimizeResult optimize(const EvoaConfig& config, const std::optional<Genome>& seed_candidate,
                        const std::function<double(const Genome&)>& fitness) {
  validate(config);
  const std::size_t length = config.genome_length();
  if (seed_candidate && seed_candidate->size() != length) {
    throw std::invalid_argument("optimize: seed genome length does not match config");
  }

  Rng rng(config.rng_seed);
  auto evaluate = [&](const Genome& genome, std::uint64_t& counter) {
    const double value = fitness(genome);
    ++counter;
    if (!std::isfinite(value)) {
      throw DomainError("optimize: fitness is not finite for genome " + to_string(genome));
    }
    return value;
  };

  OptimizeResult result;
  std::vector<Genome> population;
  std::vector<double> scores;
  population.reserve(static_cast<std::size_t>(config.population));
  scores.reserve(static_cast<std::size_t>(config.population));

  for (int i = 0; i < config.population; ++i) {
    if (i == 0 && seed_candidate) {
      population.push_back(*seed_candidate);
    } else {
      population.push_back(random_genome(length, rng));
    }
    scores.push_back(evaluate(population.back(), result.evaluations));
  }

  std::size_t best_index = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (scores[i] < scores[best_index]) best_index = i;
  }
  Genome best_genome = population[best_index];
  double best_score = scores[best_index];

  result.history.reserve(static_cast<std::size_t>(config.max_iterations) + 1);
  result.history.push_back(best_score);

  for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
    for (std::size_t member = 0; member < population.size(); ++member) {
      Genome moved = toss_pebbles(population[member], config.pebble_max, rng);
      moved = roll_solution(moved, rng);
      moved = change_angle(moved, config.pebble_max, rng);
      const double score = evaluate(moved, result.evaluations);
      if (score < best_score) {
        best_score = score;
        best_genome = moved;
      }
      if (score < scores[member]) {
        population[member] = std::move(moved);
        scores[member] = score;
      }
    }
    result.history.push_back(best_score);
  }

  result.best = Candidate{std::move(best_genome), best_score};
  return result;
}

}  // namespace pidtune
