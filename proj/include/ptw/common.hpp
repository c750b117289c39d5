// Shared small utilities: fixed-width aliases, a reproducible RNG, a
// deterministic shard-and-reduce parallel loop, and FNV hashing for reports.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ptw {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using i64 = std::int64_t;

// splitmix64: tiny, stdlib-independent generator so that seeded runs are
// reproducible across compilers and standard libraries (std distributions
// are implementation-defined and must not be used for persisted output).
struct Rng {
  u64 state;

  explicit Rng(u64 seed) : state(seed) {}

  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound); bound > 0.  Rejection-free bias is negligible for
  // desk-scale bounds but we reject anyway to keep draws exactly uniform.
  u64 below(u64 bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    u64 threshold = (0 - bound) % bound;
    for (;;) {
      u64 r = next();
      if (r >= threshold) return r % bound;
    }
  }

  Rng fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }
};

// Deterministic parallel shard loop: the index space [0, count) is split into
// `shards` contiguous blocks; `body(shard, begin, end)` runs on worker
// threads; results must be merged by the caller in shard order so the
// outcome is independent of thread count and scheduling.
inline void parallel_shards(u64 count, unsigned threads,
                            const std::function<void(unsigned, u64, u64)>& body) {
  if (threads <= 1 || count < 2) {
    body(0, 0, count);
    return;
  }
  unsigned shards = threads;
  std::vector<std::thread> pool;
  pool.reserve(shards);
  u64 chunk = (count + shards - 1) / shards;
  for (unsigned s = 0; s < shards; ++s) {
    u64 b = s * chunk;
    u64 e = b + chunk < count ? b + chunk : count;
    if (b >= e) break;
    pool.emplace_back(body, s, b, e);
  }
  for (auto& t : pool) t.join();
}

inline u64 fnv1a(const void* data, std::size_t len, u64 h = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline u64 fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::string hex_u64(u64 v);

}  // namespace ptw
