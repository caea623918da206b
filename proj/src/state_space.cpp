#include "zeeman/state_space.hpp"

#include <algorithm>
#include <array>

namespace zeeman {

namespace {

constexpr std::array<Level, 3> kDescending = {Level::up, Level::mid, Level::down};

struct Offset {
  int photon_shift;
  Level m1;
  Level m2;
};

// photons = N + photon_shift
constexpr std::array<Offset, 9> kSectorListing = {{
    {+2, Level::down, Level::down},
    {+1, Level::mid, Level::down},
    {+1, Level::down, Level::mid},
    {0, Level::up, Level::down},
    {0, Level::mid, Level::mid},
    {0, Level::down, Level::up},
    {-1, Level::up, Level::mid},
    {-1, Level::mid, Level::up},
    {-2, Level::up, Level::up},
}};

}  // namespace

Level level_from_int(int m) {
  if (m < -1 || m > 1) {
    throw std::invalid_argument("magnetic sublevel must be -1, 0 or +1, got " + std::to_string(m));
  }
  return static_cast<Level>(m);
}

EmptySectorError::EmptySectorError(int n)
    : std::domain_error("conserved number " + std::to_string(n) +
                        " has an empty invariant sector (minimum is -2)") {}

Sector sector_basis(int n) {
  if (n < -2) throw EmptySectorError(n);
  Sector sector{n, {}};
  for (const auto& o : kSectorListing) {
    const int photons = n + o.photon_shift;
    if (photons >= 0) sector.basis.push_back({photons, o.m1, o.m2});
  }
  return sector;
}

Basis full_basis(int photon_cap) {
  if (photon_cap < 0) throw std::invalid_argument("photon cap must be non-negative");
  Basis basis;
  basis.reserve(9 * static_cast<std::size_t>(photon_cap + 1));
  for (int p = photon_cap; p >= 0; --p) {
    for (Level a : kDescending) {
      for (Level b : kDescending) basis.push_back({p, a, b});
    }
  }
  return basis;
}

int full_index(const BasisState& s, int photon_cap) {
  if (s.photons < 0 || s.photons > photon_cap) return -1;
  return (photon_cap - s.photons) * 9 + atomic_index(s.m1) * 3 + atomic_index(s.m2);
}

Basis pair_basis(int photons) {
  Basis basis;
  basis.reserve(9);
  for (Level a : kDescending) {
    for (Level b : kDescending) basis.push_back({photons, a, b});
  }
  return basis;
}

int max_photons(const Basis& basis) {
  int cap = 0;
  for (const auto& s : basis) cap = std::max(cap, s.photons);
  return cap;
}

std::string label(const BasisState& s) {
  return "|" + std::to_string(s.photons) + ">(" + std::to_string(value(s.m1)) + "," +
         std::to_string(value(s.m2)) + ")";
}

}  // namespace zeeman
