#ifndef BNSL_COMMON_HPP
#define BNSL_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bnsl {

// Variables are indexed 0..d-1 and variable sets are bitmasks, so d is
// capped well below 32.  Joint tables put the real ceiling much lower.
inline constexpr int kMaxVars = 30;

using VarMask = std::uint32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct LimitExceeded : Error {
  using Error::Error;
};
struct NoData : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct ConstructionError : Error {
  using Error::Error;
};

inline int popcount(VarMask m) { return __builtin_popcount(m); }
inline int lowest_bit(VarMask m) { return __builtin_ctz(m); }

// Iterate set bits low to high.
template <typename Fn>
inline void for_each_bit(VarMask m, Fn&& fn) {
  while (m != 0) {
    int v = lowest_bit(m);
    m &= m - 1;
    fn(v);
  }
}

// Counter-based seed derivation so every run, cell and rep owns an
// independent substream of the root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(root ^ splitmix64(a)) ^ splitmix64(~b));
}

std::uint64_t joint_table_cell_limit();  // default 1<<24, BNSL_ENUM_LIMIT overrides

}  // namespace bnsl

#endif
