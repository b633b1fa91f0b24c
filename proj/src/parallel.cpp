#include "rsgdim/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace rsg {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

void parallel_for(std::size_t total, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  workers = std::max(1, workers);
  if (workers == 1 || total < 2048) {
    fn(0, total);
    return;
  }
  // Chunk width independent of the worker count.
  std::size_t chunk = std::max<std::size_t>(1024, total / (4 * static_cast<std::size_t>(workers)));
  std::size_t nchunks = (total + chunk - 1) / chunk;
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= nchunks) return;
      std::size_t b = k * chunk;
      std::size_t e = std::min(total, b + chunk);
      fn(b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

double deterministic_sum(std::size_t total, int workers,
                         const std::function<double(std::size_t)>& term) {
  if (total == 0) return 0.0;
  std::size_t nchunks = (total + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      std::size_t b = c * kSumChunk;
      std::size_t e = std::min(total, b + kSumChunk);
      double acc = 0.0;
      for (std::size_t i = b; i < e; ++i) acc += term(i);
      partial[c] = acc;
    }
  });
  double out = 0.0;
  for (double p : partial) out += p;
  return out;
}

}  // namespace rsg
