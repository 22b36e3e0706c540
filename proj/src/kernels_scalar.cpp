#include "wittcheck/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string_view>
#include <vector>

namespace wittcheck::kernels {

namespace {

void convolve_scalar(const int64_t* a, std::size_t na, const int64_t* b, std::size_t nb,
                     int64_t* out, std::size_t out_len, int64_t q) {
  const std::size_t terms = na < nb ? na : nb;
  if (detail::fits_u64_accumulator(terms, q)) {
    std::vector<uint64_t> acc(out_len, 0);
    for (std::size_t i = 0; i < na && i < out_len; ++i) {
      const uint64_t ai = static_cast<uint64_t>(a[i]);
      if (ai == 0) continue;
      const std::size_t lim = (out_len - i < nb) ? out_len - i : nb;
      for (std::size_t j = 0; j < lim; ++j) acc[i + j] += ai * static_cast<uint64_t>(b[j]);
    }
    for (std::size_t k = 0; k < out_len; ++k) out[k] = static_cast<int64_t>(acc[k] % static_cast<uint64_t>(q));
    return;
  }
  std::vector<unsigned __int128> acc(out_len, 0);
  const unsigned __int128 qq = static_cast<unsigned __int128>(q);
  for (std::size_t i = 0; i < na && i < out_len; ++i) {
    const unsigned __int128 ai = static_cast<uint64_t>(a[i]);
    if (ai == 0) continue;
    const std::size_t lim = (out_len - i < nb) ? out_len - i : nb;
    for (std::size_t j = 0; j < lim; ++j) {
      acc[i + j] += ai * static_cast<uint64_t>(b[j]);
      // q < 2^62 so one product is below 2^124; fold before the next add can overflow.
      if (acc[i + j] >= (static_cast<unsigned __int128>(1) << 126)) acc[i + j] %= qq;
    }
  }
  for (std::size_t k = 0; k < out_len; ++k) out[k] = static_cast<int64_t>(acc[k] % qq);
}

void add_scalar(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    int64_t s = a[i] + b[i];
    out[i] = s >= q ? s - q : s;
  }
}

void sub_scalar(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    int64_t s = a[i] - b[i];
    out[i] = s < 0 ? s + q : s;
  }
}

void sub_inplace_scalar(int64_t* dst, const int64_t* src, std::size_t n, int64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    int64_t s = dst[i] - src[i];
    dst[i] = s < 0 ? s + q : s;
  }
}

const Table kScalar{"scalar", convolve_scalar, add_scalar, sub_scalar, sub_inplace_scalar};

}  // namespace

const Table& scalar() { return kScalar; }

#ifndef WITTCHECK_HAVE_AVX2
const Table* avx2() { return nullptr; }
#endif

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("WITTCHECK_KERNEL");
    if (env != nullptr && std::string_view(env) == "scalar") return &kScalar;
    const Table* v = avx2();
    return v != nullptr ? v : &kScalar;
  }();
  return *chosen;
}

}  // namespace wittcheck::kernels
