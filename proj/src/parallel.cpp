#include "vvmf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace vvmf {
namespace {

int initial_threads() {
  if (const char* env = std::getenv("VVMF_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& threads() {
  static std::atomic<int> n{initial_threads()};
  return n;
}

}  // namespace

int thread_count() { return threads().load(); }

void set_thread_count(int n) { threads().store(n < 1 ? 1 : n); }

}  // namespace vvmf
