#include "wald/rng.hpp"

namespace wald {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = stream ^ 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(t);
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::uint64_t fnv1a(const char* s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *s != '\0'; ++s) {
    h ^= static_cast<unsigned char>(*s);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t state = stream_key(seed, stream);
  for (auto& word : s_) word = splitmix64(state);
}

}  // namespace wald
