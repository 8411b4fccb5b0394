#include "supnorm/rng.hpp"

#include <array>

namespace supnorm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSpec RngSpec::child(std::uint64_t sub) const {
  return RngSpec{splitmix64(master_seed ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL)), sub};
}

std::mt19937_64 RngSpec::engine() const {
  const std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace supnorm
