#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeeman {

/// Magnetic sublevel of one three-level atom. Only m in {-1, 0, +1} exists.
enum class Level : std::int8_t { down = -1, mid = 0, up = 1 };

constexpr int value(Level l) { return static_cast<int>(l); }

/// Throws std::invalid_argument unless m is -1, 0 or +1.
Level level_from_int(int m);

/// Position of a level inside a single-atom 3x3 operator: +1 -> 0, 0 -> 1, -1 -> 2.
constexpr int atomic_index(Level l) { return 1 - value(l); }

/// |photons> (x) |m1> (x) |m2>.
struct BasisState {
  int photons = 0;
  Level m1 = Level::down;
  Level m2 = Level::down;

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

using Basis = std::vector<BasisState>;

/// Raised when a conserved number lies below the smallest reachable value (-2).
class EmptySectorError : public std::domain_error {
 public:
  explicit EmptySectorError(int n);
};

struct Sector {
  int conserved_n = 0;
  Basis basis;

  std::size_t dim() const { return basis.size(); }
};

/// photons + m1 + m2, the eigenvalue of a^dag a + l1z + l2z.
constexpr int conserved_number(const BasisState& s) {
  return s.photons + value(s.m1) + value(s.m2);
}

/// Invariant-sector basis in the conventional listing:
///   |N+2>(-1,-1), |N+1>(0,-1), |N+1>(-1,0), |N>(1,-1), |N>(0,0), |N>(-1,1),
///   |N-1>(1,0), |N-1>(0,1), |N-2>(1,1)
/// with negative photon numbers dropped. Throws EmptySectorError for N < -2.
Sector sector_basis(int n);

/// All 9*(photon_cap+1) product states. Photons run from photon_cap down to 0;
/// inside one photon number m1 runs +1, 0, -1 and, inside that, m2 does too.
/// Index of a state is (photon_cap - photons) * 9 + atomic_index(m1) * 3 + atomic_index(m2),
/// i.e. the row-major layout of photon (x) atom1 (x) atom2.
Basis full_basis(int photon_cap);

/// Index of s in full_basis(photon_cap), or -1 when s.photons exceeds the cap.
int full_index(const BasisState& s, int photon_cap);

/// The nine atomic pairs carrying a fixed photon label, in full-basis order.
Basis pair_basis(int photons);

/// Largest photon number appearing in a basis (0 for an empty basis).
int max_photons(const Basis& basis);

/// "|2>(-1,-1)"
std::string label(const BasisState& s);

}  // namespace zeeman
