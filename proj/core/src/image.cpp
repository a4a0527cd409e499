#include "corrtrack/image.h"

namespace corrtrack {

SilhouetteMask silhouette_of(const DepthImage &depth) {
  SilhouetteMask mask{depth.width(), depth.height(), 0};
  for (std::size_t i = 0; i < depth.data().size(); ++i)
    mask.data()[i] = depth.data()[i] > 0.0f ? 1 : 0;
  return mask;
}

}  // namespace corrtrack
