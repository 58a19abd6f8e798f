#include "carlab/fock_space.hpp"

#include <algorithm>
#include <string>

#include "carlab/errors.hpp"

namespace carlab {

FockSpace::FockSpace(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) {
    throw ResourceError("mode count " + std::to_string(modes) + " outside 1.." +
                        std::to_string(kMaxModes));
  }
  auto layout = std::make_shared<Layout>();
  const std::size_t dim = std::size_t{1} << modes;
  layout->masks.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) layout->masks[i] = static_cast<Mask>(i);
  std::stable_sort(layout->masks.begin(), layout->masks.end(), [](Mask a, Mask b) {
    const int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  layout->index_of.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) layout->index_of[layout->masks[i]] = i;
  layout->offsets.assign(static_cast<std::size_t>(modes) + 2, 0);
  for (int n = 0; n <= modes; ++n) {
    layout->offsets[static_cast<std::size_t>(n) + 1] =
        layout->offsets[static_cast<std::size_t>(n)] + binomial(modes, n);
  }
  layout_ = std::move(layout);
}

int FockSpace::particle_number(std::size_t index) const { return popcount(mask(index)); }

std::size_t FockSpace::sector_size(int n) const {
  return (n < 0 || n > modes_) ? 0 : binomial(modes_, n);
}

std::span<const Mask> FockSpace::sector_masks(int n) const {
  if (n < 0 || n > modes_) return {};
  return {layout_->masks.data() + sector_begin(n), sector_size(n)};
}

FockSpace make_space(int modes) { return FockSpace(modes); }

std::size_t binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return out;
}

std::vector<int> occupied_modes(Mask mask) {
  std::vector<int> out;
  for (int j = 0; mask != 0; ++j, mask >>= 1) {
    if (mask & 1u) out.push_back(j);
  }
  return out;
}

}  // namespace carlab
