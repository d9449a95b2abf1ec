"""Built-in eta-quotient newforms and their exact coefficient expansions.

Each registry form is a product prod_i eta(d_i z)^{e_i} whose q-prefactor
exponent sum(d_i e_i)/24 must be exactly 1, so the expansion is
q * prod_i (series in q^{d_i}) and the leading coefficient a(1) = 1.
"""

from __future__ import annotations

import math
import os
import random
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .primes import primes_up_to
from .series import IntSeries, eta_power_series, dilate, mul, sparse_power_dense

CACHE_ENV_VAR = "HECKELAB_CACHE_DIR"
_CACHE_MAGIC = b"HKLC"
_CACHE_VERSION = 1


class RecipeError(ValueError):
    """An eta recipe violates the structural invariants."""


class CacheFormatError(RuntimeError):
    """A coefficient cache file is malformed or does not match the request."""


@dataclass(frozen=True)
class FormDescriptor:
    """A newform given by an eta-quotient recipe."""

    name: str
    weight: int
    level: int
    cm: bool
    eta_recipe: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        if not self.eta_recipe:
            raise RecipeError(f"{self.name}: empty eta recipe")
        for d, e in self.eta_recipe:
            if d < 1:
                raise RecipeError(f"{self.name}: eta argument multiplier {d} must be >= 1")
            if e < 1:
                raise RecipeError(
                    f"{self.name}: eta exponent {e} must be >= 1 "
                    "(negative exponents would need series inversion, unsupported)"
                )
        pref = sum(d * e for d, e in self.eta_recipe)
        if pref % 24 != 0:
            raise RecipeError(
                f"{self.name}: sum(d*e) = {pref} is not divisible by 24, "
                "so the q-prefactor exponent is not an integer"
            )
        if pref // 24 != 1:
            raise RecipeError(
                f"{self.name}: q-prefactor exponent {pref // 24} != 1, "
                "so the expansion would not start with a(1) = 1"
            )
        esum = sum(e for _, e in self.eta_recipe)
        if esum % 2 != 0 or esum // 2 != self.weight:
            raise RecipeError(
                f"{self.name}: weight {self.weight} inconsistent with recipe "
                f"(sum of exponents {esum} must equal 2*weight)"
            )
        if self.weight < 1 or self.weight % 2 != 0:
            raise RecipeError(f"{self.name}: weight must be a positive even integer")
        if self.level < 1:
            raise RecipeError(f"{self.name}: level must be >= 1")

    def ramified_primes(self) -> tuple[int, ...]:
        n, out = self.level, []
        for p in range(2, n + 1):
            if p * p > n:
                break
            if n % p == 0:
                out.append(p)
                while n % p == 0:
                    n //= p
        if n > 1:
            out.append(n)
        return tuple(out)


REGISTRY: dict[str, FormDescriptor] = {
    "delta": FormDescriptor("delta", 12, 1, False, ((1, 24),)),
    "lvl11": FormDescriptor("lvl11", 2, 11, False, ((1, 2), (11, 2))),
    "lvl27": FormDescriptor("lvl27", 2, 27, True, ((3, 2), (9, 2))),
    "lvl32": FormDescriptor("lvl32", 2, 32, True, ((4, 2), (8, 2))),
}


class CoefficientSeries:
    """Exact a(n) for 1 <= n <= X, with normalized values derived on demand."""

    __slots__ = ("form", "a")

    def __init__(self, form: FormDescriptor, a: list[int]):
        self.form = form
        self.a = a  # a[0] unused, a[n] exact

    @property
    def X(self) -> int:
        return len(self.a) - 1

    def lambda_at(self, n: int) -> float:
        """a(n) / n^((k-1)/2); the exact integer stays available as .a[n]."""
        if not 1 <= n <= self.X:
            raise IndexError(f"n={n} outside expanded range 1..{self.X}")
        return float(self.a[n]) / math.pow(n, (self.form.weight - 1) / 2)

    def sign_at(self, n: int) -> int:
        if not 1 <= n <= self.X:
            raise IndexError(f"n={n} outside expanded range 1..{self.X}")
        v = self.a[n]
        return (v > 0) - (v < 0)

    def __repr__(self) -> str:
        return f"CoefficientSeries({self.form.name}, X={self.X})"


def _eta_factor_dense(d: int, e: int, precision: int) -> IntSeries:
    """Dense expansion of prod (1 - q^{d n})^e to the given precision."""
    if precision == 0:
        return IntSeries([1])
    if e % 3 == 0:
        base_r, exponent = 3, e // 3
    else:
        base_r, exponent = 1, e
    base_X = precision // d
    if base_X < 1:
        return IntSeries.one(precision)
    sp = dilate(eta_power_series(base_r, base_X), d, precision=precision)
    return sparse_power_dense(sp, exponent, precision)


def _expand_fresh(form: FormDescriptor, X: int) -> CoefficientSeries:
    product_precision = X - 1
    dense: IntSeries | None = None
    for d, e in form.eta_recipe:
        factor = _eta_factor_dense(d, e, product_precision)
        dense = factor if dense is None else mul(dense, factor)
    assert dense is not None
    a = [0] * (X + 1)
    a[1 : X + 1] = dense.coeffs[:X]
    return CoefficientSeries(form, a)


def resolve_form(form: FormDescriptor | str) -> FormDescriptor:
    if isinstance(form, str):
        try:
            return REGISTRY[form]
        except KeyError:
            known = ", ".join(sorted(REGISTRY))
            raise ValueError(f"unknown form {form!r}; registry has: {known}") from None
    return form


def expand(
    form: FormDescriptor | str,
    X: int,
    cache_dir: str | Path | None = None,
    use_cache: bool = True,
) -> CoefficientSeries:
    """Exact a(n) for n <= X, loading from / writing to the disk cache."""
    form = resolve_form(form)
    form.validate()
    if X < 1:
        raise ValueError(f"precision X={X} must be >= 1")
    path = cache_path(form, X, cache_dir) if use_cache else None
    if path is not None and path.exists():
        return read_cache(path, expected_form=form, expected_X=X)
    series = _expand_fresh(form, X)
    if path is not None:
        write_cache(series, path)
    return series


# ---------------------------------------------------------------------------
# Invariant scans.  Each returns the list of offenders (empty = pass) so that
# callers can report precisely what broke.

def deligne_violations(series: CoefficientSeries, bound: int | None = None) -> list[int]:
    """Unramified primes p <= bound with a(p)^2 > 4 p^(k-1), exact integers."""
    k, N = series.form.weight, series.form.level
    top = series.X if bound is None else min(bound, series.X)
    a = series.a
    return [
        int(p)
        for p in primes_up_to(top).tolist()
        if N % p != 0 and a[p] * a[p] > 4 * p ** (k - 1)
    ]


def hecke_p2_failures(series: CoefficientSeries) -> list[int]:
    """Primes p <= sqrt(X) where a(p^2) deviates from the degree-2 relation."""
    k, N = series.form.weight, series.form.level
    a = series.a
    bad = []
    for p in primes_up_to(math.isqrt(series.X)).tolist():
        p = int(p)
        expected = a[p] * a[p] if N % p == 0 else a[p] * a[p] - p ** (k - 1)
        if a[p * p] != expected:
            bad.append(p)
    return bad


def multiplicativity_failures(
    series: CoefficientSeries, pairs: int = 1000, seed: int = 16127
) -> list[tuple[int, int]]:
    """Random coprime pairs (m, n), m*n <= X, with a(m n) != a(m) a(n)."""
    rng = random.Random(seed)
    a = series.a
    X = series.X
    bad = []
    found = 0
    while found < pairs:
        m = rng.randint(2, max(2, X // 2))
        n = rng.randint(2, max(2, X // m))
        if m * n > X or math.gcd(m, n) != 1:
            continue
        found += 1
        if a[m * n] != a[m] * a[n]:
            bad.append((m, n))
    return bad


def cm_vanishing_failures(
    series: CoefficientSeries, modulus: int, residue: int, bound: int | None = None
) -> list[int]:
    """Primes p = residue (mod modulus), p <= bound, with a(p) != 0."""
    top = series.X if bound is None else min(bound, series.X)
    a = series.a
    return [
        int(p)
        for p in primes_up_to(top).tolist()
        if p % modulus == residue and a[p] != 0
    ]


# ---------------------------------------------------------------------------
# Disk cache: magic, version, form name, k, N, X, then X little-endian signed
# length-prefixed integer records for a(1..X).  Round-trips must be bit-exact.

def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "heckelab"


def cache_path(form: FormDescriptor, X: int, cache_dir: str | Path | None = None) -> Path:
    base = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    return base / f"{form.name}_X{X}.coeffs"


def _encode_int(v: int) -> bytes:
    length = (v.bit_length() + 8) // 8  # minimal two's-complement length
    return struct.pack("<I", length) + v.to_bytes(length, "little", signed=True)


def write_cache(series: CoefficientSeries, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    form = series.form
    name_bytes = form.name.encode("utf-8")
    buf = bytearray()
    buf += _CACHE_MAGIC
    buf += struct.pack("<I", _CACHE_VERSION)
    buf += struct.pack("<H", len(name_bytes)) + name_bytes
    buf += struct.pack("<II", form.weight, form.level)
    buf += struct.pack("<Q", series.X)
    for n in range(1, series.X + 1):
        buf += _encode_int(series.a[n])
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(buf)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_cache(
    path: str | Path,
    expected_form: FormDescriptor | None = None,
    expected_X: int | None = None,
) -> CoefficientSeries:
    data = Path(path).read_bytes()
    view = memoryview(data)
    if bytes(view[:4]) != _CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic bytes")
    (version,) = struct.unpack_from("<I", view, 4)
    if version != _CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported cache version {version}")
    (name_len,) = struct.unpack_from("<H", view, 8)
    off = 10
    name = bytes(view[off : off + name_len]).decode("utf-8")
    off += name_len
    weight, level = struct.unpack_from("<II", view, off)
    off += 8
    (X,) = struct.unpack_from("<Q", view, off)
    off += 8
    if expected_form is not None and (
        name != expected_form.name
        or weight != expected_form.weight
        or level != expected_form.level
    ):
        raise CacheFormatError(
            f"{path}: header ({name}, k={weight}, N={level}) does not match "
            f"requested form {expected_form.name}"
        )
    if expected_X is not None and X != expected_X:
        raise CacheFormatError(f"{path}: cached X={X}, requested X={expected_X}")
    if expected_form is not None:
        form = expected_form
    elif name in REGISTRY:
        form = REGISTRY[name]
    else:
        raise CacheFormatError(
            f"{path}: form {name!r} is not in the registry; pass expected_form"
        )
    a = [0] * (X + 1)
    for n in range(1, X + 1):
        (length,) = struct.unpack_from("<I", view, off)
        off += 4
        a[n] = int.from_bytes(view[off : off + length], "little", signed=True)
        off += length
    if off != len(data):
        raise CacheFormatError(f"{path}: trailing bytes after {X} records")
    return CoefficientSeries(form, a)
