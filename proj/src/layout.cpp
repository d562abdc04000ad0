#include "sgl/layout.hpp"

#include "sgl/errors.hpp"

namespace sgl {

AngularLayout AngularLayout::from_counts(int M, std::vector<int> counts) {
  if (M < 0) throw LayoutError("angular layout: M must be non-negative");
  if (counts.size() != static_cast<std::size_t>(2 * M + 1))
    throw LayoutError("angular layout: expected 2M+1 radial counts");
  AngularLayout layout;
  layout.M = M;
  layout.ell = std::move(counts);
  layout.offsets.resize(layout.ell.size());
  int acc = 0;
  for (std::size_t i = 0; i < layout.ell.size(); ++i) {
    if (layout.ell[i] < 0) throw LayoutError("angular layout: negative radial count");
    layout.offsets[i] = acc;
    acc += layout.ell[i];
  }
  layout.D = acc;
  return layout;
}

}  // namespace sgl
