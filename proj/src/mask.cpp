#include "satnet/mask.hpp"

namespace satnet {

StreamMask mask_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::DRSMA: return {true, true};
    case Scheme::M_RSMA: return {false, true};
    case Scheme::M_SDMA: return {false, false};
  }
  return {true, true};
}

}  // namespace satnet
