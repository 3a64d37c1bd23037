#include "tnav/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace tnav {

namespace {
int g_num_threads = 0;  // 0 = hardware default

int resolve_threads() {
  if (g_num_threads > 0) return g_num_threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

int num_threads() { return resolve_threads(); }

void set_num_threads(int n) { g_num_threads = n < 0 ? 0 : n; }

std::size_t parallel_block_count(std::size_t n) {
  const std::size_t t = static_cast<std::size_t>(resolve_threads());
  return std::min(n, t);
}

void parallel_for_blocks(
    std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t blocks = parallel_block_count(n);
  if (blocks <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(blocks);
  const std::size_t chunk = (n + blocks - 1) / blocks;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, b, begin, end] { fn(b, begin, end); });
  }
  for (auto& w : workers) w.join();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  parallel_for_blocks(n, [&fn](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace tnav
