"""Exact integer convolution via number-theoretic transforms.

The product is computed modulo several word-size primes and reconstructed
with the Chinese remainder theorem.  A proven per-coefficient magnitude
bound must be supplied by the caller; the prime set is chosen so that the
combined modulus strictly exceeds twice that bound, and the selection
fails hard (never wraps) when the pool cannot reach it.
"""

from __future__ import annotations

import numpy as np
from numba import njit


class NttCapacityError(RuntimeError):
    """The CRT modulus or transform length cannot cover the requested product."""


# (prime, primitive root, v2) with v2 = 2-adic valuation of p-1, i.e. the
# largest power-of-two transform length the prime supports is 2^v2.
# Sorted by v2 descending, then magnitude descending, so the greedy
# selection below prefers large primes with ample transform headroom.
_PRIME_POOL: tuple[tuple[int, int, int], ...] = (
    (2013265921, 31, 27),
    (1811939329, 13, 26),
    (469762049, 3, 26),
    (2113929217, 5, 25),
    (1711276033, 29, 25),
    (1107296257, 10, 25),
    (167772161, 3, 25),
    (2130706433, 3, 24),
    (1224736769, 3, 24),
    (754974721, 11, 24),
    (2088763393, 5, 23),
    (1484783617, 5, 23),
    (1300234241, 3, 23),
    (998244353, 3, 23),
    (897581057, 3, 23),
    (880803841, 26, 23),
    (645922817, 3, 23),
    (595591169, 3, 23),
    (377487361, 7, 23),
    (2025848833, 10, 22),
    (1866465281, 3, 22),
    (1790967809, 13, 22),
    (1572864001, 13, 22),
    (1438646273, 3, 22),
)

MAX_TRANSFORM_LOG2 = _PRIME_POOL[0][2]

_INT64_SAFE = 1 << 62


@njit(cache=True)
def _ntt_core(a, p, wtab):  # pragma: no cover - exercised via convolve_exact
    """In-place iterative radix-2 transform; a holds residues in [0, p)."""
    n = a.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = a[i]
            a[i] = a[j]
            a[j] = tmp
    length = 2
    while length <= n:
        half = length >> 1
        step = n // length
        for start in range(0, n, length):
            idx = 0
            for off in range(half):
                u = a[start + off]
                v = (a[start + off + half] * wtab[idx]) % p
                x = u + v
                if x >= p:
                    x -= p
                y = u - v
                if y < 0:
                    y += p
                a[start + off] = x
                a[start + off + half] = y
                idx += step
        length <<= 1


def _root_powers(p: int, g: int, n: int, inverse: bool = False) -> np.ndarray:
    """Powers w^0 .. w^(n/2 - 1) of the order-n root w = g^((p-1)/n) mod p."""
    w = pow(g, (p - 1) // n, p)
    if inverse:
        w = pow(w, p - 2, p)
    out = np.empty(max(n // 2, 1), dtype=np.int64)
    out[0] = 1
    filled = 1
    wpow = w
    while filled < n // 2:
        take = min(filled, n // 2 - filled)
        out[filled : filled + take] = (out[:take] * wpow) % p
        filled += take
        wpow = (wpow * wpow) % p
    return out


def _select_primes(bound: int, log2_n: int) -> list[tuple[int, int]]:
    eligible = [(p, g) for p, g, v2 in _PRIME_POOL if v2 >= log2_n]
    if not eligible:
        raise NttCapacityError(
            f"transform length 2^{log2_n} exceeds the prime pool's "
            f"2^{MAX_TRANSFORM_LOG2} capacity"
        )
    chosen: list[tuple[int, int]] = []
    modulus = 1
    target = 2 * bound + 1
    for p, g in eligible:
        chosen.append((p, g))
        modulus *= p
        if modulus >= target:
            return chosen
    raise NttCapacityError(
        f"CRT modulus ({modulus.bit_length()} bits over {len(chosen)} primes) "
        f"cannot exceed twice the proven coefficient bound "
        f"({bound.bit_length()} bits); refusing to wrap"
    )


def _residues(coeffs: list[int], n: int, p: int, arr64: np.ndarray | None) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    if arr64 is not None:
        out[: len(coeffs)] = arr64 % p
    else:
        out[: len(coeffs)] = np.array([c % p for c in coeffs], dtype=np.int64)
    return out


def _garner_combine(digits: list[np.ndarray], primes: list[int]) -> list[int]:
    """Mixed-radix CRT reconstruction with a signed half-modulus lift."""
    k = len(primes)
    mixed = [digits[0]]
    for j in range(1, k):
        pj = primes[j]
        t = digits[j]
        for i in range(j):
            inv = pow(primes[i] % pj, pj - 2, pj)
            t = ((t - mixed[i]) * inv) % pj
        mixed.append(t)
    res = mixed[-1].astype(object)
    for i in range(k - 2, -1, -1):
        res = res * primes[i] + mixed[i]
    modulus = 1
    for p in primes:
        modulus *= p
    half = modulus >> 1
    res = res - (res > half).astype(object) * modulus
    return res.tolist()


def convolve_exact(a: list[int], b: list[int], out_len: int, bound: int) -> list[int]:
    """Exact truncated convolution of integer coefficient lists.

    `bound` must be a proven bound on |c_n| for every product coefficient;
    it drives the CRT prime selection.  Falls back to direct convolution
    for tiny operands, where transform setup would dominate.
    """
    need = len(a) + len(b) - 1
    if bound < 0:
        raise ValueError("coefficient bound must be non-negative")
    if bound == 0:
        return [0] * out_len
    if need <= 16:
        out = [0] * need
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out[:out_len] + [0] * max(0, out_len - need)
    n = 1 << (need - 1).bit_length()
    log2_n = n.bit_length() - 1
    primes = _select_primes(bound, log2_n)

    def _to_int64(coeffs: list[int]) -> np.ndarray | None:
        try:
            return np.array(coeffs, dtype=np.int64)
        except OverflowError:
            return None

    a64 = _to_int64(a)
    b64 = _to_int64(b)
    keep = min(out_len, need)
    digits = []
    for p, g in primes:
        wt = _root_powers(p, g, n)
        fa = _residues(a, n, p, a64)
        fb = _residues(b, n, p, b64)
        _ntt_core(fa, p, wt)
        _ntt_core(fb, p, wt)
        fc = (fa * fb) % p
        _ntt_core(fc, p, _root_powers(p, g, n, inverse=True))
        ninv = pow(n, p - 2, p)
        fc = (fc * ninv) % p
        digits.append(fc[:keep])
    out = _garner_combine(digits, [p for p, _ in primes])
    if out_len > keep:
        out = out + [0] * (out_len - keep)
    return out
