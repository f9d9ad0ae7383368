"""Splitting of rational primes in a number field.

Only the *shape* of ``pO_K`` is computed: the residue degrees and
ramification indices of the prime ideals above ``p``.  Estimators consume
nothing else, so equal-degree factorization is never needed.
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import kernels
from .numfield import NumberFieldProfile

__all__ = [
    "LocalSplitting",
    "PrimePowerTerm",
    "SplittingTable",
    "UnsupportedIndexDivisor",
    "strict_limit",
    "sieve_primes",
    "dedekind_index_test",
    "split_prime",
    "split_table",
    "enumerate_prime_powers",
    "parse_overrides",
    "load_overrides",
]

SEGMENT = 1 << 18
BLOCK = 1 << 15


class UnsupportedIndexDivisor(Exception):
    """``p`` divides the index of Z[theta]; factoring f mod p is not enough."""

    def __init__(self, p):
        super().__init__(f"prime {p} divides the index [O_K : Z[theta]]; supply an override")
        self.p = int(p)


@dataclass(frozen=True)
class LocalSplitting:
    p: int
    factors: Tuple[Tuple[int, int], ...]  # (residue degree, ramification index), sorted
    index_divisor: bool = False

    @property
    def known(self) -> bool:
        return bool(self.factors)

    def __str__(self):
        if not self.factors:
            return "?"
        return " ".join(f"{f}^{e}" for f, e in self.factors)


@dataclass(frozen=True)
class PrimePowerTerm:
    p: int
    f: int
    m: int
    log_norm_p: float

    @property
    def log_norm(self) -> float:
        return self.m * self.log_norm_p

    @property
    def norm(self) -> int:
        return self.p ** (self.f * self.m)


def strict_limit(X) -> int:
    """Largest integer strictly below ``X``."""
    return math.ceil(X) - 1


# -- primes ------------------------------------------------------------------

def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags).astype(np.int64)


def prime_segments(lo: int, hi: int, width: int = SEGMENT) -> Iterator[np.ndarray]:
    """Primes in [lo, hi), one array per segment of ``width`` integers."""
    base = _small_primes(math.isqrt(max(hi - 1, 0)))
    for a in range(lo, hi, width):
        yield kernels.sieve_segment(a, min(a + width, hi), base)


def sieve_primes(X) -> np.ndarray:
    """All primes p < X, ascending."""
    hi = strict_limit(X) + 1
    if hi <= 2:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(list(prime_segments(0, hi)))


# -- polynomials over F_p (plain Python; used only at primes dividing disc) ---

def _tr(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a, p):
    return _tr([x % p for x in a])


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _tr([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _tr(out)


def _divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for j, y in enumerate(b):
            a[s + j] = (a[s + j] - c * y) % p
        a = _tr(a)
    return _tr(q), a


def _gcd(a, b, p):
    a, b = _tr(a), _tr(b)
    while b:
        a, b = b, _divmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def _deriv(a, p):
    return _tr([(i * x) % p for i, x in enumerate(a)][1:])


def _pth_root(a, p):
    return _tr([a[i] for i in range(0, len(a), p)])


def squarefree_decomposition(f, p) -> List[Tuple[list, int]]:
    """Monic ``f`` over F_p as a list of (squarefree g, multiplicity)."""
    out = []
    df = _deriv(f, p)
    if not df:
        return [(g, m * p) for g, m in squarefree_decomposition(_pth_root(f, p), p)]
    c = _gcd(f, df, p)
    w = _divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(w, c, p)
        z = _divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = _divmod(c, y, p)[0]
    if len(c) > 1:
        out.extend((g, m * p) for g, m in squarefree_decomposition(_pth_root(c, p), p))
    return out


def _degree_counts(g, p) -> np.ndarray:
    row = np.array([g], dtype=np.int64)
    return kernels.ddf_counts(row, np.array([p], dtype=np.int64))[0]


def dedekind_index_test(poly, p: int) -> bool:
    """True iff ``p`` divides the index of Z[x]/(f) in the maximal order."""
    coeffs = list(getattr(poly, "coeffs", poly))
    fbar = _mod(coeffs, p)
    g = [1]
    for part, _ in squarefree_decomposition(fbar, p):
        g = _mul(g, part, p)
    h = _divmod(fbar, g, p)[0]
    gh = [0] * (len(g) + len(h) - 1)
    for i, x in enumerate(g):
        for j, y in enumerate(h):
            gh[i + j] += x * y
    diff = [(gh[i] if i < len(gh) else 0) - (coeffs[i] if i < len(coeffs) else 0)
            for i in range(max(len(gh), len(coeffs)))]
    assert all(x % p == 0 for x in diff)
    F = _mod([x // p for x in diff], p)
    d = _gcd(_gcd(F, g, p), h, p)
    return len(d) > 1


# -- local splitting -------------------------------------------------------

def _quadratic_factors(chi: int):
    if chi == 1:
        return ((1, 1), (1, 1))
    if chi == -1:
        return ((2, 1),)
    return ((1, 2),)


def _kronecker(d: int, p: int) -> int:
    a = d % 8 if p == 2 else d % p
    return int(kernels.kronecker_at_primes(np.array([a], np.int64), np.array([p], np.int64))[0])


def _quadratic_index_divisor(field: NumberFieldProfile, p: int) -> bool:
    q = field.disc_poly // field.fundamental_disc  # index squared
    return q % (p * p) == 0


def _poly_factors(field: NumberFieldProfile, p: int, strict: bool) -> LocalSplitting:
    coeffs = field.poly.coeffs
    if field.disc_poly % p:
        counts = _degree_counts([c % p for c in coeffs], p)
        facs = tuple((d, 1) for d in range(1, len(counts)) for _ in range(int(counts[d])))
        return LocalSplitting(p, facs, False)
    if dedekind_index_test(field.poly, p):
        if strict:
            raise UnsupportedIndexDivisor(p)
        return LocalSplitting(p, (), True)
    facs = []
    for g, e in squarefree_decomposition(_mod(coeffs, p), p):
        counts = _degree_counts(g, p)
        facs.extend((d, e) for d in range(1, len(counts)) for _ in range(int(counts[d])))
    return LocalSplitting(p, tuple(sorted(facs)), False)


def split_prime(field: NumberFieldProfile, p: int, overrides: Optional[Dict[int, tuple]] = None,
                method: str = "auto", strict: bool = True) -> LocalSplitting:
    """Residue degrees and ramification indices of the primes above ``p``.

    ``method`` is ``"auto"``, ``"kronecker"`` (quadratic fields only) or
    ``"polynomial"``.  With ``strict=False`` an unsupported index divisor
    comes back with empty ``factors`` instead of raising.
    """
    p = int(p)
    if field.n == 1:
        return LocalSplitting(p, ((1, 1),), False)
    if overrides and p in overrides:
        flag = field.disc_poly % p == 0 and (
            _quadratic_index_divisor(field, p) if field.n == 2 else dedekind_index_test(field.poly, p))
        return LocalSplitting(p, tuple(sorted(overrides[p])), flag)
    if method == "kronecker" or (method == "auto" and field.n == 2 and field.fundamental_disc is not None):
        if field.n != 2:
            raise ValueError("Kronecker splitting needs a quadratic field")
        chi = _kronecker(field.fundamental_disc, p)
        return LocalSplitting(p, _quadratic_factors(chi), _quadratic_index_divisor(field, p))
    loc = _poly_factors(field, p, strict)
    if loc.known and not loc.index_divisor:
        assert sum(f * e for f, e in loc.factors) == field.n
    return loc


# -- tables ----------------------------------------------------------------

@dataclass
class SplittingTable:
    """Splitting data for a range of primes in CSR layout."""

    primes: np.ndarray
    offsets: np.ndarray
    degrees: np.ndarray
    ramification: np.ndarray
    index_divisor: np.ndarray

    def __len__(self):
        return len(self.primes)

    def local(self, i: int) -> LocalSplitting:
        a, b = self.offsets[i], self.offsets[i + 1]
        facs = tuple(zip(self.degrees[a:b].tolist(), self.ramification[a:b].tolist()))
        return LocalSplitting(int(self.primes[i]), facs, bool(self.index_divisor[i]))

    def __iter__(self):
        return (self.local(i) for i in range(len(self)))

    @classmethod
    def from_locals(cls, locs: List[LocalSplitting]) -> "SplittingTable":
        primes = np.array([l.p for l in locs], dtype=np.int64)
        sizes = np.array([len(l.factors) for l in locs], dtype=np.int64)
        offsets = np.zeros(len(locs) + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        deg = np.array([f for l in locs for f, _ in l.factors], dtype=np.int64)
        ram = np.array([e for l in locs for _, e in l.factors], dtype=np.int64)
        flags = np.array([l.index_divisor for l in locs], dtype=bool)
        return cls(primes, offsets, deg, ram, flags)

    @classmethod
    def concat(cls, parts: List["SplittingTable"]) -> "SplittingTable":
        if not parts:
            return cls.from_locals([])
        offs = [np.zeros(1, np.int64)]
        base = 0
        for t in parts:
            offs.append(t.offsets[1:] + base)
            base += t.offsets[-1]
        return cls(np.concatenate([t.primes for t in parts]),
                   np.concatenate(offs),
                   np.concatenate([t.degrees for t in parts]),
                   np.concatenate([t.ramification for t in parts]),
                   np.concatenate([t.index_divisor for t in parts]))


def _residues(value: int, primes: np.ndarray, two_mod: int = 0) -> np.ndarray:
    if abs(value) < 2**62:
        out = np.int64(value) % primes
    else:
        out = np.array([value % int(q) for q in primes], dtype=np.int64)
    if two_mod and primes.size and primes[0] == 2:
        out[0] = value % two_mod
    return out


def _table_block(field, primes, overrides, method, strict) -> SplittingTable:
    k = len(primes)
    if k == 0:
        return SplittingTable.from_locals([])
    if field.n == 1:
        ones = np.ones(k, dtype=np.int64)
        return SplittingTable(primes, np.arange(k + 1, dtype=np.int64), ones, ones.copy(),
                              np.zeros(k, dtype=bool))
    use_kron = method == "kronecker" or (
        method == "auto" and field.n == 2 and field.fundamental_disc is not None)
    if use_kron:
        chi = kernels.kronecker_at_primes(_residues(field.fundamental_disc, primes, 8), primes)
        sizes = np.where(chi == 1, 2, 1).astype(np.int64)
        offsets = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        deg = np.ones(offsets[-1], dtype=np.int64)
        ram = np.ones(offsets[-1], dtype=np.int64)
        deg[offsets[:-1][chi == -1]] = 2
        ram[offsets[:-1][chi == 0]] = 2
        index = np.zeros(k, dtype=bool)
        q = field.disc_poly // field.fundamental_disc
        if q != 1:
            index = np.array([q % (int(p) ** 2) == 0 for p in primes], dtype=bool)
        table = SplittingTable(primes, offsets, deg, ram, index)
        if not overrides:
            return table
        return SplittingTable.from_locals([
            split_prime(field, int(p), overrides, method, strict) if int(p) in overrides else table.local(i)
            for i, p in enumerate(primes)])
    coeffs = field.poly.coeffs
    n = field.n
    good = _residues(field.disc_poly, primes) != 0
    if overrides:
        good &= np.array([int(p) not in overrides for p in primes], dtype=bool)
    gp = primes[good]
    rows = np.empty((gp.size, n + 1), dtype=np.int64)
    for j, c in enumerate(coeffs):
        rows[:, j] = _residues(c, gp)
    counts = kernels.ddf_counts(rows, gp) if gp.size else np.zeros((0, n + 1), np.int64)
    locs = []
    gi = 0
    for i, p in enumerate(primes):
        if good[i]:
            row = counts[gi]
            gi += 1
            facs = tuple((d, 1) for d in range(1, n + 1) for _ in range(int(row[d])))
            locs.append(LocalSplitting(int(p), facs, False))
        else:
            locs.append(split_prime(field, int(p), overrides, method, strict))
    return SplittingTable.from_locals(locs)


def split_table(field: NumberFieldProfile, X, overrides: Optional[Dict[int, tuple]] = None,
                threads: int = 1, method: str = "auto", strict: bool = True,
                block: int = BLOCK) -> SplittingTable:
    """Splitting of every prime p < X.

    The prime range is cut into blocks of ``block`` consecutive integers;
    blocks may run concurrently but are merged in ascending order, so the
    result does not depend on ``threads``.
    """
    hi = strict_limit(X) + 1
    if hi <= 2:
        return SplittingTable.from_locals([])
    base = _small_primes(math.isqrt(hi - 1))
    bounds = [(a, min(a + block, hi)) for a in range(0, hi, block)]

    def work(b):
        ps = kernels.sieve_segment(b[0], b[1], base)
        return _table_block(field, ps, overrides, method, strict)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    return SplittingTable.concat(parts)


def enumerate_prime_powers(field: NumberFieldProfile, X, overrides=None, threads: int = 1
                           ) -> Iterator[PrimePowerTerm]:
    """Every prime ideal power of norm < X, ordered by (p, f, m)."""
    limit = strict_limit(X)
    table = split_table(field, X, overrides, threads)
    for i in range(len(table)):
        p = int(table.primes[i])
        lp = math.log(p)
        terms = []
        for f in sorted(table.degrees[table.offsets[i]:table.offsets[i + 1]].tolist()):
            q = p ** f
            norm, m = q, 1
            while norm <= limit:
                terms.append(PrimePowerTerm(p, f, m, f * lp))
                norm *= q
                m += 1
        terms.sort(key=lambda t: (t.f, t.m))
        yield from terms


# -- override files --------------------------------------------------------

_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def parse_overrides(text: str) -> Dict[int, tuple]:
    """Parse ``p: f1^e1 f2^e2 ...`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"override line {lineno}: cannot parse {raw!r}")
        facs = []
        for tok in m.group(2).split():
            f, _, e = tok.partition("^")
            try:
                facs.append((int(f), int(e) if e else 1))
            except ValueError:
                raise ValueError(f"override line {lineno}: bad factor {tok!r}") from None
        if not facs or any(f < 1 or e < 1 for f, e in facs):
            raise ValueError(f"override line {lineno}: empty or non-positive factors")
        out[int(m.group(1))] = tuple(facs)
    return out


def load_overrides(path, degree: Optional[int] = None) -> Dict[int, tuple]:
    with open(path) as fh:
        ov = parse_overrides(fh.read())
    if degree is not None:
        for p, facs in ov.items():
            if sum(f * e for f, e in facs) != degree:
                raise ValueError(f"override for {p}: sum e*f != {degree}")
    return ov
