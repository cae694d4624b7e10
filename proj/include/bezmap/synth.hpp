#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bezmap/errors.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/polyline.hpp"

namespace bezmap {

// Deterministic synthetic corpus generator standing in for a real dataset.
// Shape families are tuned so the default class configurations fit at
// epsilon = 0.1 m without capacity errors; the same values ship in
// configs/synth-default.json (schema bezmap-synth/1).
struct CorpusSpec {
  std::uint64_t seed{7};
  int per_class{500};
  double noise{0.01};  // uniform jitter amplitude in meters

  double divider_length_min{15.0};
  double divider_length_max{35.0};
  double divider_amplitude_min{0.1};
  double divider_amplitude_max{0.7};

  double crossing_length_min{3.0};
  double crossing_length_max{8.0};

  double boundary_length_min{28.0};
  double boundary_length_max{45.0};
  double boundary_primary_amplitude_min{0.8};
  double boundary_primary_amplitude_max{2.0};
  double boundary_secondary_amplitude_min{0.15};
  double boundary_secondary_amplitude_max{0.5};
};

namespace detail {

// mt19937_64 with a fixed 53-bit uniform mapping, so identical seeds give
// byte-identical corpora on every platform.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform(0.0, 1.0) * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

constexpr double kPi = 3.14159265358979323846;

}  // namespace detail

// Generates per_class instances of each default class, all inside the
// default perception range: dividers are smooth low-curvature arcs,
// crossings short straight bands, boundaries long multi-bend chains.
inline VectorMap synth_corpus(const CorpusSpec& spec) {
  if (spec.per_class < 0) throw DomainError("synth_corpus: negative instance count");
  if (spec.noise < 0) throw DomainError("synth_corpus: negative noise amplitude");
  detail::SynthRng rng(spec.seed);
  VectorMap map;

  // lane-divider: single gentle sine arc along x, at most one period.
  for (int i = 0; i < spec.per_class; ++i) {
    const double len = rng.uniform(spec.divider_length_min, spec.divider_length_max);
    const double x0 = rng.uniform(-29.0, 29.0 - len);
    const double amp = rng.uniform(spec.divider_amplitude_min, spec.divider_amplitude_max);
    const double y0 = rng.uniform(-14.0 + amp + 0.1, 14.0 - amp - 0.1);
    const double wavelength = rng.uniform(len, 1.8 * len);
    const double phase = rng.uniform(0.0, 2.0 * detail::kPi);
    const int count = rng.uniform_int(60, 140);
    std::vector<Vec2> pts(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
      const double x = x0 + len * static_cast<double>(j) / static_cast<double>(count - 1);
      const double y = y0 + amp * std::sin(2.0 * detail::kPi * x / wavelength + phase) +
                       rng.uniform(-spec.noise, spec.noise);
      pts[static_cast<std::size_t>(j)] = {x, y};
    }
    map.instances.push_back(MapInstance{0, Polyline(std::move(pts)), std::nullopt});
  }

  // ped-crossing: straight band at an arbitrary heading.
  for (int i = 0; i < spec.per_class; ++i) {
    const double len = rng.uniform(spec.crossing_length_min, spec.crossing_length_max);
    const double heading = rng.uniform(0.0, detail::kPi);
    const double cx = rng.uniform(-29.0 + len / 2.0, 29.0 - len / 2.0);
    const double cy = rng.uniform(-14.0 + len / 2.0, 14.0 - len / 2.0);
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    const int count = rng.uniform_int(2, 30);
    std::vector<Vec2> pts(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
      const double a = -len / 2.0 + len * static_cast<double>(j) / static_cast<double>(count - 1);
      pts[static_cast<std::size_t>(j)] = {cx + a * dir.x + rng.uniform(-spec.noise, spec.noise),
                                          cy + a * dir.y + rng.uniform(-spec.noise, spec.noise)};
    }
    map.instances.push_back(MapInstance{1, Polyline(std::move(pts)), std::nullopt});
  }

  // road-boundary: two superposed harmonics along x.
  for (int i = 0; i < spec.per_class; ++i) {
    const double len = rng.uniform(spec.boundary_length_min, spec.boundary_length_max);
    const double x0 = rng.uniform(-29.0, 29.0 - len);
    const double a1 =
        rng.uniform(spec.boundary_primary_amplitude_min, spec.boundary_primary_amplitude_max);
    const double a2 =
        rng.uniform(spec.boundary_secondary_amplitude_min, spec.boundary_secondary_amplitude_max);
    const double y0 = rng.uniform(-14.0 + a1 + a2 + 0.1, 14.0 - a1 - a2 - 0.1);
    const double l1 = rng.uniform(0.9 * len, 1.5 * len);
    const double l2 = rng.uniform(0.35 * len, 0.6 * len);
    const double p1 = rng.uniform(0.0, 2.0 * detail::kPi);
    const double p2 = rng.uniform(0.0, 2.0 * detail::kPi);
    const int count = rng.uniform_int(100, 200);
    std::vector<Vec2> pts(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
      const double x = x0 + len * static_cast<double>(j) / static_cast<double>(count - 1);
      const double y = y0 + a1 * std::sin(2.0 * detail::kPi * x / l1 + p1) +
                       a2 * std::sin(2.0 * detail::kPi * x / l2 + p2) +
                       rng.uniform(-spec.noise, spec.noise);
      pts[static_cast<std::size_t>(j)] = {x, y};
    }
    map.instances.push_back(MapInstance{2, Polyline(std::move(pts)), std::nullopt});
  }

  return map;
}

}  // namespace bezmap
