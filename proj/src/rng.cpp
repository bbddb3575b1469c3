#include "moralsim/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace moralsim {

std::string RngStream::save_state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void RngStream::load_state(const std::string& text) {
  std::istringstream is(text);
  is >> engine_;
  if (is.fail()) throw std::runtime_error("corrupt RNG state string");
}

}  // namespace moralsim
