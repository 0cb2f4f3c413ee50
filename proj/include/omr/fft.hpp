// Self-contained complex FFT: iterative radix-2 for power-of-two lengths,
// Bluestein (chirp-z) for everything else. Deterministic bit-for-bit across
// runs, which the reproducibility contract depends on.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "omr/signal.hpp"

namespace omr {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cplx& x : a) x *= inv;
    }
}

}  // namespace detail

// In-place DFT of arbitrary length. Forward uses exp(-i 2 pi kn/N); the
// inverse includes the 1/N factor.
inline void fft(std::vector<cplx>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (detail::is_pow2(n)) {
        detail::fft_radix2(a, inverse);
        return;
    }
    // Bluestein: x[k] * chirp -> convolution with conjugate chirp.
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small for long transforms
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), inverse ? std::sin(ang) : -std::sin(ang));
    }
    std::vector<cplx> fa(m, cplx(0.0, 0.0)), fb(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
    detail::fft_radix2(fa, false);
    detail::fft_radix2(fb, false);
    for (std::size_t k = 0; k < m; ++k) fa[k] *= fb[k];
    detail::fft_radix2(fa, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k];
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cplx& x : a) x *= inv;
    }
}

inline std::vector<cplx> fft_real(const std::vector<double>& x) {
    std::vector<cplx> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = cplx(x[i], 0.0);
    fft(a, false);
    return a;
}

}  // namespace omr
