#include "storax/transforms.hpp"

namespace storax {

MachineSpec desensitize(const MachineSpec& spec) {
  (void)spec;
  throw std::logic_error("desensitize: not implemented yet");
}

MachineSpec right_turn_restrict(const MachineSpec& spec) {
  (void)spec;
  throw std::logic_error("right_turn_restrict: not implemented yet");
}

}  // namespace storax
