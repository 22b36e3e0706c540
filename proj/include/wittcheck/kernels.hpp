#pragma once

#include <cstddef>
#include <cstdint>

// Coefficient-vector kernels over Z/q with q < 2^62. Inputs are canonical
// residues in [0, q); outputs are canonical as well.
namespace wittcheck::kernels {

struct Table {
  const char* name;
  // out[k] = sum_{i+j=k} a[i] b[j] mod q for k < out_len.
  void (*convolve)(const int64_t* a, std::size_t na, const int64_t* b, std::size_t nb,
                   int64_t* out, std::size_t out_len, int64_t q);
  void (*add)(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q);
  void (*sub)(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q);
  // dst[i] = dst[i] - src[i] mod q. The ranges must not overlap.
  void (*sub_inplace)(int64_t* dst, const int64_t* src, std::size_t n, int64_t q);
};

const Table& scalar();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const Table* avx2();

// Chosen once per process. WITTCHECK_KERNEL=scalar forces the reference path.
const Table& active();

namespace detail {
// True when n products of residues below q fit an unsigned 64-bit accumulator.
inline bool fits_u64_accumulator(std::size_t n, int64_t q) {
  if (q >= (int64_t(1) << 31)) return false;
  unsigned __int128 bound = (unsigned __int128)(q - 1) * (unsigned __int128)(q - 1) * n;
  return bound < ((unsigned __int128)1 << 64);
}
}  // namespace detail

}  // namespace wittcheck::kernels
