#include "unicr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace unicr {
namespace {

std::atomic<int> g_max_threads{1};

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

int max_threads() { return g_max_threads.load(); }

void run_chunked(std::size_t n_rows, std::uint64_t seed,
                 const std::function<void(std::size_t, std::size_t, std::size_t, Rng&)>& fn) {
  if (n_rows == 0) return;
  const std::size_t n_chunks = (n_rows + kChunkRows - 1) / kChunkRows;
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kChunkRows;
    const std::size_t end = std::min(begin + kChunkRows, n_rows);
    Rng rng(derive_seed(seed, c + 1));
    fn(c, begin, end, rng);
  };

  const int threads = std::min<int>(max_threads(), static_cast<int>(n_chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) break;
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace unicr
