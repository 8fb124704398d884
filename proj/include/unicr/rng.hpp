#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <random>

namespace unicr {

/// SplitMix64 finalizer; used to derive decorrelated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

template <typename... Salts>
std::uint64_t derive_seed(std::uint64_t base, Salts... salts) {
  std::uint64_t s = splitmix64(base);
  ((s = mix_seed(s, static_cast<std::uint64_t>(salts))), ...);
  return s;
}

inline std::uint64_t hash_double(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return splitmix64(bits);
}

/// Deterministic generator used by all Monte Carlo code. Uniform doubles are
/// built from the top 53 bits of the engine output so draws do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Maximum worker threads for chunked Monte Carlo loops. Results are
/// bit-identical for any setting: work is split into fixed-size chunks, each
/// chunk draws from its own substream, and reductions run in chunk order.
void set_max_threads(int n);
int max_threads();

inline constexpr std::size_t kChunkRows = 8192;

/// Runs fn(chunk_index, row_begin, row_end, rng) over fixed chunks of
/// [0, n_rows). The chunk rng is seeded from derive_seed(seed, chunk_index).
/// Chunks may execute on multiple threads; fn must only touch state owned by
/// its chunk (per-chunk accumulators, disjoint output ranges).
void run_chunked(std::size_t n_rows, std::uint64_t seed,
                 const std::function<void(std::size_t, std::size_t, std::size_t, Rng&)>& fn);

}  // namespace unicr
