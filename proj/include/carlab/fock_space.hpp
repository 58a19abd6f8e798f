#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace carlab {

/// Occupation pattern of a basis state: bit j set <=> mode j occupied (modes are 0-based).
using Mask = std::uint32_t;

/**
 * Fermionic Fock space over L = C^m in the occupation-number basis.
 *
 * Basis states are ordered by particle number first and bitmask second, so
 * each n-particle sector is a contiguous index range. The layout tables are
 * shared and immutable; copies are cheap and safe to use from any thread.
 */
class FockSpace {
 public:
  static constexpr int kMaxModes = 14;
  /// Largest mode count for which full 2^m x 2^m matrices are built.
  static constexpr int kMaxDenseModes = 10;

  /// Throws ResourceError unless 1 <= modes <= kMaxModes.
  explicit FockSpace(int modes);

  int modes() const noexcept { return modes_; }
  std::size_t dim() const noexcept { return std::size_t{1} << modes_; }

  Mask mask(std::size_t index) const { return layout_->masks[index]; }
  std::size_t index(Mask mask) const { return layout_->index_of[mask]; }
  int particle_number(std::size_t index) const;

  /// First basis index of the n-particle sector.
  std::size_t sector_begin(int n) const { return layout_->offsets[static_cast<std::size_t>(n)]; }
  /// Number of basis states with exactly n particles, C(m, n); zero outside 0..m.
  std::size_t sector_size(int n) const;
  std::span<const Mask> sector_masks(int n) const;

  bool dense_allowed() const noexcept { return modes_ <= kMaxDenseModes; }

  friend bool operator==(const FockSpace& a, const FockSpace& b) noexcept {
    return a.modes_ == b.modes_;
  }

 private:
  struct Layout {
    std::vector<Mask> masks;
    std::vector<std::size_t> index_of;
    std::vector<std::size_t> offsets;  // m + 2 entries
  };
  int modes_;
  std::shared_ptr<const Layout> layout_;
};

FockSpace make_space(int modes);

inline int popcount(Mask m) noexcept { return __builtin_popcount(m); }

std::size_t binomial(int n, int k) noexcept;

/// Modes (0-based, ascending) occupied in `mask`.
std::vector<int> occupied_modes(Mask mask);

}  // namespace carlab
