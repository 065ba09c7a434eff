#include "polar/parallel.hpp"

#include <cstdlib>
#include <string>

namespace polar {

int max_threads() {
  if (const char* env = std::getenv("POLARLAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace polar
