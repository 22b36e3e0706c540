#include "wittcheck/kernels.hpp"

#include <immintrin.h>

#include <vector>

namespace wittcheck::kernels {

namespace {

void convolve_avx2(const int64_t* a, std::size_t na, const int64_t* b, std::size_t nb,
                   int64_t* out, std::size_t out_len, int64_t q) {
  const std::size_t terms = na < nb ? na : nb;
  if (!detail::fits_u64_accumulator(terms, q)) {
    scalar().convolve(a, na, b, nb, out, out_len, q);
    return;
  }
  std::vector<uint64_t> acc(out_len + 4, 0);
  for (std::size_t i = 0; i < na && i < out_len; ++i) {
    if (a[i] == 0) continue;
    // Residues are below 2^31, so the low 32 bits of each lane hold the value.
    const __m256i ai = _mm256_set1_epi64x(a[i]);
    const std::size_t lim = (out_len - i < nb) ? out_len - i : nb;
    std::size_t j = 0;
    for (; j + 4 <= lim; j += 4) {
      __m256i bj = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + j));
      __m256i* dst = reinterpret_cast<__m256i*>(acc.data() + i + j);
      __m256i cur = _mm256_loadu_si256(dst);
      cur = _mm256_add_epi64(cur, _mm256_mul_epu32(ai, bj));
      _mm256_storeu_si256(dst, cur);
    }
    for (; j < lim; ++j) acc[i + j] += static_cast<uint64_t>(a[i]) * static_cast<uint64_t>(b[j]);
  }
  const uint64_t qu = static_cast<uint64_t>(q);
  for (std::size_t k = 0; k < out_len; ++k) out[k] = static_cast<int64_t>(acc[k] % qu);
}

inline __m256i reduce_high(__m256i s, __m256i qv) {
  // s in [0, 2q): subtract q where s >= q.
  __m256i ge = _mm256_cmpgt_epi64(qv, s);  // q > s
  return _mm256_sub_epi64(s, _mm256_andnot_si256(ge, qv));
}

inline __m256i reduce_low(__m256i s, __m256i qv) {
  // s in (-q, q): add q where s < 0.
  __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), s);
  return _mm256_add_epi64(s, _mm256_and_si256(neg, qv));
}

void add_avx2(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q) {
  const __m256i qv = _mm256_set1_epi64x(q);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), reduce_high(_mm256_add_epi64(x, y), qv));
  }
  for (; i < n; ++i) {
    int64_t s = a[i] + b[i];
    out[i] = s >= q ? s - q : s;
  }
}

void sub_avx2(const int64_t* a, const int64_t* b, int64_t* out, std::size_t n, int64_t q) {
  const __m256i qv = _mm256_set1_epi64x(q);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), reduce_low(_mm256_sub_epi64(x, y), qv));
  }
  for (; i < n; ++i) {
    int64_t s = a[i] - b[i];
    out[i] = s < 0 ? s + q : s;
  }
}

void sub_inplace_avx2(int64_t* dst, const int64_t* src, std::size_t n, int64_t q) {
  sub_avx2(dst, src, dst, n, q);
}

const Table kAvx2{"avx2", convolve_avx2, add_avx2, sub_avx2, sub_inplace_avx2};

}  // namespace

const Table* avx2() {
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &kAvx2 : nullptr;
}

}  // namespace wittcheck::kernels
