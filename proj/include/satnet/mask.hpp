#pragma once

#include "satnet/scenario.hpp"

namespace satnet {

/// Stream on/off switches expressing the three schemes over one problem
/// builder. Disabling a stream pins its covariance trace and rate splits to
/// zero and drops the matching slack families, so the feasible set of a
/// masked problem is a subset of the unmasked one by construction.
struct StreamMask {
  bool geo_common = true;  // s_gc super-common stream
  bool sub_common = true;  // per-LEO sub-common streams
};

StreamMask mask_for(Scheme scheme);

}  // namespace satnet
