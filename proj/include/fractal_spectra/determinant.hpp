#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace fractal_spectra {

namespace detail {

// Row-wise denominator clearing: returns integer matrix Z and the product D of
// the per-row scale factors, so that det(M) = det(Z) / D.
inline std::pair<std::vector<mpz_class>, mpz_class> clear_denominators(const LevelMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<mpz_class> z(n * n);
    mpz_class dprod(1);
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class l(1);
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).den().get_mpz_t());
        for (std::size_t j = 0; j < n; ++j) {
            mpz_class q = l / m(i, j).den();
            z[i * n + j] = m(i, j).num() * q;
        }
        dprod *= l;
    }
    return {std::move(z), std::move(dprod)};
}

// Fraction-free Bareiss elimination over integers. Deterministic pivoting:
// first nonzero entry in the column.
inline mpz_class bareiss_int_det(std::vector<mpz_class>& a, std::size_t n) {
    if (n == 0) return mpz_class(1);
    int sign = 1;
    mpz_class prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv * n + k] == 0) ++piv;
        if (piv == n) return mpz_class(0);
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
                mpz_divexact(a[i * n + j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i * n + k] = 0;
        }
        prev = a[k * n + k];
    }
    mpz_class det = a[(n - 1) * n + (n - 1)];
    if (sign < 0) det = -det;
    return det;
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic Miller-Rabin base set for 64-bit integers.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline std::uint64_t det_mod_p(std::vector<std::uint64_t> a, std::size_t n, std::uint64_t p) {
    std::uint64_t det = 1;
    bool neg = false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv * n + k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            neg = !neg;
        }
        const std::uint64_t pk = a[k * n + k];
        det = mulmod_u64(det, pk, p);
        const std::uint64_t inv = powmod_u64(pk, p - 2, p);
        for (std::size_t i = k + 1; i < n; ++i) {
            std::uint64_t f = a[i * n + k];
            if (!f) continue;
            f = mulmod_u64(f, inv, p);
            a[i * n + k] = 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                std::uint64_t sub = mulmod_u64(f, a[k * n + j], p);
                std::uint64_t& x = a[i * n + j];
                x = (x >= sub) ? x - sub : x + p - sub;
            }
        }
    }
    if (neg && det) det = p - det;
    return det;
}

// Hadamard bound on |det| for an integer matrix, as an mpz with slack.
inline mpz_class hadamard_bound(const std::vector<mpz_class>& z, std::size_t n) {
    // work in log2 with long doubles; entries here stay far below overflow
    long double log2b = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double s = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            long double x = std::fabs(mpz_get_d(z[i * n + j].get_mpz_t()));
            s += x * x;
        }
        if (s < 1.0L) s = 1.0L;
        log2b += 0.5L * std::log2(s);
    }
    mpz_class b(1);
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<mp_bitcnt_t>(log2b) + 8);
    return b;
}

// Multi-modular determinant with CRT reconstruction; exact.
inline mpz_class multimodular_int_det(const std::vector<mpz_class>& z, std::size_t n) {
    const mpz_class bound = 2 * hadamard_bound(z, n) + 1;
    mpz_class modulus(1), det(0);
    std::uint64_t p = (1ull << 62) - 57;
    std::vector<std::uint64_t> red(n * n);
    while (modulus < bound) {
        while (!is_prime_u64(p)) --p;
        for (std::size_t k = 0; k < n * n; ++k) {
            red[k] = mpz_fdiv_ui(z[k].get_mpz_t(), p);
        }
        const std::uint64_t dp = det_mod_p(red, n, p);
        // CRT: det' = det + modulus * ((dp - det) * modulus^{-1} mod p)
        mpz_class pz(static_cast<unsigned long>(p >> 32));
        pz <<= 32;
        pz += static_cast<unsigned long>(p & 0xffffffffull);
        mpz_class dpz(static_cast<unsigned long>(dp >> 32));
        dpz <<= 32;
        dpz += static_cast<unsigned long>(dp & 0xffffffffull);
        mpz_class minv;
        if (mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t()) == 0)
            throw internal_error("multimodular determinant: modulus not invertible");
        mpz_class t = ((dpz - det % pz) % pz + pz) % pz;
        t = (t * minv) % pz;
        det += modulus * t;
        modulus *= pz;
        --p;
    }
    // symmetric residue
    if (det * 2 > modulus) det -= modulus;
    return det;
}

}  // namespace detail

/// Exact determinant of a square rational matrix; no rounding ever.
///
/// Fraction-free Bareiss elimination after clearing row denominators; large
/// matrices switch to an exact multi-modular evaluation of the same integer
/// determinant (CRT with a Hadamard bound), which avoids Bareiss's big-operand
/// intermediate swell.
inline Rational exact_determinant(const LevelMatrix& m) {
    if (!m.is_square()) throw input_error("exact_determinant: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return Rational(1);
    auto [z, dprod] = detail::clear_denominators(m);
    mpz_class det = (n <= 64) ? detail::bareiss_int_det(z, n) : detail::multimodular_int_det(z, n);
    return Rational(det, dprod);
}

/// Sign and natural log of |det| via double LU with partial pivoting.
/// Never overflows; used for the numeric (non-exact) factorization checks.
struct LogDet {
    int sign;        // -1, 0, +1
    double log_abs;  // meaningful only when sign != 0
};

inline LogDet log_abs_determinant(DMatrix a) {
    if (!a.is_square()) throw input_error("log_abs_determinant: matrix not square");
    const std::size_t n = a.rows();
    int sign = 1;
    double log_abs = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return {0, 0.0};
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        const double pivot = a(k, k);
        if (pivot < 0) sign = -sign;
        log_abs += std::log(std::fabs(pivot));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / pivot;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            a(i, k) = 0.0;
        }
    }
    return {sign, log_abs};
}

}  // namespace fractal_spectra
