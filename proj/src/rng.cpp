#include "gbench/rng.hpp"

namespace gbench {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) noexcept {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::string_view problem, std::string_view role, std::uint64_t index,
                          std::uint64_t master) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(problem, h);
  h = fnv1a("\x1f", h);
  h = fnv1a(role, h);
  return splitmix64(splitmix64(h ^ splitmix64(master)) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index + 0x2545f4914f6cdd1dULL));
}

}  // namespace gbench
