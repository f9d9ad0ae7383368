"""Hot inner loops.

Every kernel exists twice: a numba-compiled ``*_nb`` version and a
numpy/Python ``*_np`` version with the same signature and semantics.  The
unsuffixed names are bound to one or the other according to
:data:`dedekind_residue._jit.ENABLED`.

Conventions shared by the kernels:

* ``limit`` is always an *integer* and the cutoff is ``norm <= limit``; callers
  turn a strict real cutoff ``norm < X`` into ``limit = ceil(X) - 1``.
* A prime table is described by ``primes`` (int64, ascending), ``offsets``
  (int64, length ``len(primes) + 1``) and ``degrees`` (int64): the residue
  degrees of the ideals above ``primes[i]`` are
  ``degrees[offsets[i]:offsets[i + 1]]``.
* Moduli stay below 2**31 so that products of residues fit in int64.
"""
import math

import numpy as np

from ._jit import ENABLED, njit

# ---------------------------------------------------------------------------
# sieve


@njit
def sieve_segment_nb(lo, hi, base):
    flags = np.ones(hi - lo, dtype=np.bool_)
    for i in range(hi - lo):
        if lo + i < 2:
            flags[i] = False
    for k in range(base.shape[0]):
        p = base[k]
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        for j in range(start - lo, hi - lo, p):
            flags[j] = False
    out = np.empty(flags.sum(), dtype=np.int64)
    c = 0
    for i in range(hi - lo):
        if flags[i]:
            out[c] = lo + i
            c += 1
    return out


def sieve_segment_np(lo, hi, base):
    flags = np.ones(hi - lo, dtype=bool)
    if lo < 2:
        flags[: min(2 - lo, hi - lo)] = False
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        flags[start - lo :: p] = False
    return (np.flatnonzero(flags) + lo).astype(np.int64)


# ---------------------------------------------------------------------------
# Legendre / Kronecker symbols at primes


@njit
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


@njit
def kronecker_at_primes_nb(d_mod, primes):
    """``(d | p)`` for each prime; ``d_mod[i]`` is ``d mod primes[i]`` and
    ``d_mod`` for p = 2 carries ``d mod 8``."""
    out = np.empty(primes.shape[0], dtype=np.int8)
    for i in range(primes.shape[0]):
        p = primes[i]
        a = d_mod[i]
        if p == 2:
            if a % 2 == 0:
                out[i] = 0
            elif a == 1 or a == 7:
                out[i] = 1
            else:
                out[i] = -1
        elif a == 0:
            out[i] = 0
        else:
            out[i] = 1 if _powmod(a, (p - 1) // 2, p) == 1 else -1
    return out


def kronecker_at_primes_np(d_mod, primes):
    d_mod = np.asarray(d_mod, dtype=np.int64)
    primes = np.asarray(primes, dtype=np.int64)
    m = np.where(primes == 2, 3, primes)  # keep the odd-prime arithmetic harmless at p = 2
    base = d_mod % m
    e = (m - 1) // 2
    r = np.ones_like(base)
    while np.any(e > 0):
        odd = (e & 1) == 1
        r = np.where(odd, (r * base) % m, r)
        base = (base * base) % m
        e >>= 1
    out = np.where(r == 1, 1, -1).astype(np.int8)
    out[d_mod % np.where(primes == 2, 8, primes) == 0] = 0
    two = primes == 2
    if np.any(two):
        a = d_mod[two] % 8
        out[two] = np.where(a % 2 == 0, 0, np.where((a == 1) | (a == 7), 1, -1))
    return out


# ---------------------------------------------------------------------------
# factor-degree counts of squarefree polynomials mod p


@njit
def _inv(a, p):
    return _powmod(a, p - 2, p)


@njit
def _deg(a):
    d = a.shape[0] - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@njit
def _reduce(a, f, nf, p):
    # a <- a mod f, f monic of degree nf; a has room for its own degree only
    for i in range(a.shape[0] - 1, nf - 1, -1):
        c = a[i]
        if c != 0:
            for j in range(nf):
                a[i - nf + j] = (a[i - nf + j] - c * f[j]) % p
            a[i] = 0


@njit
def _mulmod(a, b, f, nf, p):
    prod = np.zeros(2 * nf + 1, dtype=np.int64)
    for i in range(nf):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(nf):
            prod[i + j] = (prod[i + j] + ai * b[j]) % p
    _reduce(prod, f, nf, p)
    out = np.zeros(a.shape[0], dtype=np.int64)
    for i in range(nf):
        out[i] = prod[i]
    return out


@njit
def _powx_mod(base, e, f, nf, p, size):
    r = np.zeros(size, dtype=np.int64)
    r[0] = 1
    b = base.copy()
    while e > 0:
        if e & 1:
            r = _mulmod(r, b, f, nf, p)
        b = _mulmod(b, b, f, nf, p)
        e >>= 1
    return r


@njit
def _gcd(a, b, p):
    a = a.copy()
    b = b.copy()
    da = _deg(a)
    db = _deg(b)
    while db >= 0:
        inv = _inv(b[db], p)
        for i in range(da, db - 1, -1):
            c = (a[i] * inv) % p
            if c != 0:
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - c * b[j]) % p
        a, b = b, a
        da = db
        db = _deg(b)
    if da >= 0:
        inv = _inv(a[da], p)
        for i in range(da + 1):
            a[i] = (a[i] * inv) % p
    return a, da


@njit
def _exact_div(a, g, dg, p):
    # a / g with g monic, exact division; returns quotient in a buffer of a's size
    a = a.copy()
    q = np.zeros(a.shape[0], dtype=np.int64)
    da = _deg(a)
    for i in range(da, dg - 1, -1):
        c = a[i]
        if c != 0:
            q[i - dg] = c
            for j in range(dg + 1):
                a[i - dg + j] = (a[i - dg + j] - c * g[j]) % p
    return q


@njit
def ddf_counts_one_nb(fm, p, counts):
    """Distinct-degree counts of the squarefree monic ``fm`` (ascending,
    reduced mod p); ``counts[d]`` receives the number of degree-d factors."""
    n = fm.shape[0] - 1
    if n == 1:
        counts[1] += 1
        return
    size = n + 1
    fr = fm.copy()
    nr = n
    x = np.zeros(size, dtype=np.int64)
    x[1] = 1
    h = x.copy()
    d = 0
    while 2 * (d + 1) <= nr:
        d += 1
        h = _powx_mod(h, p, fr, nr, p, size)
        diff = h.copy()
        diff[1] = (diff[1] - 1) % p
        g, dg = _gcd(fr, diff, p)
        if dg > 0:
            counts[d] += dg // d
            fr = _exact_div(fr, g, dg, p)
            nr -= dg
            hh = np.zeros(2 * size + 1, dtype=np.int64)
            for i in range(size):
                hh[i] = h[i]
            _reduce(hh, fr, nr, p)
            h = np.zeros(size, dtype=np.int64)
            for i in range(nr):
                h[i] = hh[i]
    if nr > 0:
        counts[nr] += 1


@njit
def ddf_counts_nb(coeffs_mod, primes):
    """Row ``i`` of ``coeffs_mod`` is the monic polynomial reduced mod
    ``primes[i]``.  Returns ``counts[i, d]``."""
    k = primes.shape[0]
    n = coeffs_mod.shape[1] - 1
    out = np.zeros((k, n + 1), dtype=np.int64)
    for i in range(k):
        ddf_counts_one_nb(coeffs_mod[i].copy(), primes[i], out[i])
    return out


def _np_reduce(a, f, p):
    nf = len(f) - 1
    a = a.copy()
    for i in range(len(a) - 1, nf - 1, -1):
        c = a[i]
        if c:
            a[i - nf : i + 1] = (a[i - nf : i + 1] - c * f) % p
    return a[:nf] if len(a) >= nf else np.concatenate([a, np.zeros(nf - len(a), np.int64)])


def _np_trim(a):
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _np_gcd(a, b, p):
    a = _np_trim(a)
    b = _np_trim(b)
    while b.size:
        inv = pow(int(b[-1]), p - 2, p)
        bm = (b * inv) % p
        while a.size >= b.size:
            c = a[-1]
            s = a.size - b.size
            a = a.copy()
            a[s:] = (a[s:] - c * bm) % p
            a = _np_trim(a)
            if not a.size:
                break
        a, b = b, a
    if a.size:
        a = (a * pow(int(a[-1]), p - 2, p)) % p
    return a


def _np_divexact(a, g, p):
    a = _np_trim(a).copy()
    dg = len(g) - 1
    q = np.zeros(max(len(a) - dg, 1), dtype=np.int64)
    for i in range(len(a) - 1, dg - 1, -1):
        c = a[i]
        if c:
            q[i - dg] = c
            a[i - dg : i + 1] = (a[i - dg : i + 1] - c * g) % p
    return q


def ddf_counts_np(coeffs_mod, primes):
    coeffs_mod = np.asarray(coeffs_mod, dtype=np.int64)
    k, n1 = coeffs_mod.shape
    n = n1 - 1
    out = np.zeros((k, n + 1), dtype=np.int64)
    for i in range(k):
        p = int(primes[i])
        if n * p * p >= 2**62:
            raise OverflowError("numpy path needs n*p^2 < 2^62")
        fr = coeffs_mod[i].copy()
        if n == 1:
            out[i, 1] = 1
            continue
        h = np.zeros(n, dtype=np.int64)
        h[1] = 1
        d = 0
        while 2 * (d + 1) <= len(fr) - 1:
            d += 1
            # h <- h^p mod fr
            r = np.zeros(len(fr) - 1, dtype=np.int64)
            r[0] = 1
            b = h.copy()
            e = p
            while e:
                if e & 1:
                    r = _np_reduce(np.convolve(r, b) % p, fr, p)
                b = _np_reduce(np.convolve(b, b) % p, fr, p)
                e >>= 1
            h = r
            diff = h.copy()
            diff[1] = (diff[1] - 1) % p
            g = _np_gcd(fr, diff, p)
            dg = len(g) - 1
            if dg > 0:
                out[i, d] += dg // d
                fr = _np_divexact(fr, g, p)
                if len(fr) > 1:
                    h = _np_reduce(h, fr, p)
        nr = len(fr) - 1
        if nr > 0:
            out[i, nr] += 1
    return out


# ---------------------------------------------------------------------------
# prime-power sums over an ideal table


@njit
def bsum_pair_nb(primes, offsets, degrees, limits, scales):
    """Two B-type sums in one pass.

    For cutoff ``c`` (0 or 1) and every prime ideal power of norm
    ``p**(f*m) <= limits[c]`` the term is
    ``f log p * N^(-1/2) * (scales[c] * N^(-1/2) / log N - 1)`` with
    ``N = p**(f*m)``; the rational terms (f = 1, one per prime) are
    subtracted prime by prime.  Kahan-compensated.
    """
    total = np.zeros(2)
    comp = np.zeros(2)
    for i in range(primes.shape[0]):
        p = primes[i]
        lp = math.log(p)
        for c in range(2):
            lim = limits[c]
            if p > lim:
                continue
            local = 0.0
            for k in range(offsets[i], offsets[i + 1]):
                f = degrees[k]
                q = 1
                ok = True
                for _ in range(f):
                    if q > lim // p:
                        ok = False
                        break
                    q *= p
                if not ok:
                    continue
                lnp = f * lp
                norm = q
                m = 1
                while True:
                    u = m * lnp
                    e = math.exp(-0.5 * u)
                    local += lnp * e * (scales[c] * e / u - 1.0)
                    if norm > lim // q:
                        break
                    norm *= q
                    m += 1
            rational = 0.0
            norm = p
            m = 1
            while True:
                u = m * lp
                e = math.exp(-0.5 * u)
                rational += lp * e * (scales[c] * e / u - 1.0)
                if norm > lim // p:
                    break
                norm *= p
                m += 1
            # accumulated in the same order as the K side, so K = Q gives exactly 0
            local -= rational
            y = local - comp[c]
            t = total[c] + y
            comp[c] = (t - total[c]) - y
            total[c] = t
    return total


def _prime_power_terms(primes, offsets, degrees, limit):
    """Flattened (prime index, log N_p, m) for all ideal powers with N <= limit."""
    rows = []
    for i, p in enumerate(primes):
        p = int(p)
        if p > limit:
            break
        lp = math.log(p)
        for f in degrees[offsets[i] : offsets[i + 1]]:
            q = p ** int(f)
            norm = q
            m = 1
            while norm <= limit:
                rows.append((i, f * lp, m))
                norm *= q
                m += 1
    if not rows:
        return np.zeros(0, np.int64), np.zeros(0), np.zeros(0)
    a = np.array(rows)
    return a[:, 0].astype(np.int64), a[:, 1], a[:, 2]


def _rational_terms(primes, limit):
    idx, lnp, ms = [], [], []
    for i, p in enumerate(primes):
        p = int(p)
        if p > limit:
            break
        norm = p
        m = 1
        while norm <= limit:
            idx.append(i)
            lnp.append(math.log(p))
            ms.append(m)
            norm *= p
            m += 1
    return np.array(idx, np.int64), np.array(lnp, float), np.array(ms, float)


def bsum_pair_np(primes, offsets, degrees, limits, scales):
    out = np.zeros(2)
    k = len(primes)
    for c in range(2):
        lim = int(limits[c])
        ik, lk, mk = _prime_power_terms(primes, offsets, degrees, lim)
        iq, lq, mq = _rational_terms(primes, lim)
        per_k = np.zeros(k)
        per_q = np.zeros(k)
        if ik.size:
            uk = mk * lk
            ek = np.exp(-0.5 * uk)
            np.add.at(per_k, ik, lk * ek * (scales[c] * ek / uk - 1.0))
        if iq.size:
            uq = mq * lq
            eq = np.exp(-0.5 * uq)
            np.add.at(per_q, iq, lq * eq * (scales[c] * eq / uq - 1.0))
        out[c] = math.fsum(per_k - per_q)
    return out


@njit
def schoof_sum_nb(primes, offsets, degrees, limit):
    """Sum over p <= limit of log(1 - 1/p) - sum_{N(P) <= limit} log(1 - 1/N(P))."""
    total = 0.0
    comp = 0.0
    for i in range(primes.shape[0]):
        p = primes[i]
        if p > limit:
            break
        ideal = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            f = degrees[k]
            q = 1
            ok = True
            for _ in range(f):
                if q > limit // p:
                    ok = False
                    break
                q *= p
            if ok:
                ideal += math.log1p(-1.0 / q)
        local = math.log1p(-1.0 / p) - ideal
        y = local - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def schoof_sum_np(primes, offsets, degrees, limit):
    primes = np.asarray(primes)
    keep = primes <= limit
    nk = int(keep.sum())
    per = np.log1p(-1.0 / primes[:nk].astype(float))
    owner = np.repeat(np.arange(len(primes)), np.diff(offsets))
    sel = owner < nk
    owner, f = owner[sel], degrees[: offsets[nk]]
    lognorm = f * np.log(primes[owner].astype(float))
    ok = lognorm <= math.log(limit) + 1e-9
    # exact integer confirmation near the boundary
    for j in np.flatnonzero(ok & (lognorm > math.log(limit) - 1e-6)):
        ok[j] = int(primes[owner[j]]) ** int(f[j]) <= limit
    norms = primes[owner[ok]].astype(float) ** f[ok]  # exact: norms <= limit < 2**53
    ideal = np.zeros(nk)
    np.add.at(ideal, owner[ok], np.log1p(-1.0 / norms))
    return math.fsum(per - ideal)


@njit
def schoof_events_nb(primes, offsets, degrees, limit, delta):
    """Scatter each Euler factor of the Schoof product into ``delta[norm]``."""
    for i in range(primes.shape[0]):
        p = primes[i]
        if p > limit:
            break
        delta[p] += math.log1p(-1.0 / p)
        for k in range(offsets[i], offsets[i + 1]):
            f = degrees[k]
            q = 1
            ok = True
            for _ in range(f):
                if q > limit // p:
                    ok = False
                    break
                q *= p
            if ok:
                delta[q] -= math.log1p(-1.0 / q)


def schoof_events_np(primes, offsets, degrees, limit, delta):
    for i, p in enumerate(primes):
        p = int(p)
        if p > limit:
            break
        delta[p] += math.log1p(-1.0 / p)
        for f in degrees[offsets[i] : offsets[i + 1]]:
            q = p ** int(f)
            if q <= limit:
                delta[q] -= math.log1p(-1.0 / q)


@njit
def kahan_cumsum_nb(a):
    out = np.empty_like(a)
    s = 0.0
    c = 0.0
    for i in range(a.shape[0]):
        y = a[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i] = s
    return out


def kahan_cumsum_np(a):
    # exactly rounded prefix sums are overkill; pairwise within numpy is enough here
    return np.cumsum(a)


@njit
def ideal_log_sum_nb(primes, offsets, degrees, limit, sigma, minus_one):
    """sum_{N(P) <= limit} log N(P) / (N(P)^sigma - minus_one)."""
    total = 0.0
    comp = 0.0
    for i in range(primes.shape[0]):
        p = primes[i]
        if p > limit:
            break
        lp = math.log(p)
        local = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            f = degrees[k]
            q = 1
            ok = True
            for _ in range(f):
                if q > limit // p:
                    ok = False
                    break
                q *= p
            if ok:
                local += f * lp / (math.exp(sigma * f * lp) - minus_one)
        y = local - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def ideal_log_sum_np(primes, offsets, degrees, limit, sigma, minus_one):
    primes = np.asarray(primes)
    owner = np.repeat(np.arange(len(primes)), np.diff(offsets))
    f = np.asarray(degrees)
    lognorm = f * np.log(primes[owner].astype(float))
    ok = np.array([int(primes[o]) ** int(ff) <= limit for o, ff in zip(owner, f)], dtype=bool)
    return math.fsum(lognorm[ok] / (np.exp(sigma * lognorm[ok]) - minus_one))


# ---------------------------------------------------------------------------
# von Mangoldt sums for the rational explicit formula


@njit
def mangoldt_plateau_sum_nb(primes, limit, T, h):
    """sum_{n <= limit} Lambda(n) n^(-1/2) F(log n) for the plateau function
    F = 1 on [0, T] and (T/t) exp(-h (t - T)) beyond."""
    total = 0.0
    comp = 0.0
    for i in range(primes.shape[0]):
        p = primes[i]
        if p > limit:
            break
        lp = math.log(p)
        norm = p
        m = 1
        local = 0.0
        while True:
            u = m * lp
            w = 1.0 if u <= T else (T / u) * math.exp(-h * (u - T))
            local += lp * math.exp(-0.5 * u) * w
            if norm > limit // p:
                break
            norm *= p
            m += 1
        y = local - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def mangoldt_plateau_sum_np(primes, limit, T, h):
    idx, lp, ms = _rational_terms(primes, limit)
    u = ms * lp
    w = np.where(u <= T, 1.0, (T / u) * np.exp(-h * (u - T)))
    return math.fsum(lp * np.exp(-0.5 * u) * w)


@njit
def mangoldt_power_sum_nb(primes, limit, sigma):
    """sum_{n <= limit} Lambda(n) n^(-sigma)."""
    total = 0.0
    comp = 0.0
    for i in range(primes.shape[0]):
        p = primes[i]
        if p > limit:
            break
        lp = math.log(p)
        norm = p
        m = 1
        local = 0.0
        while True:
            local += lp * math.exp(-sigma * m * lp)
            if norm > limit // p:
                break
            norm *= p
            m += 1
        y = local - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def mangoldt_power_sum_np(primes, limit, sigma):
    idx, lp, ms = _rational_terms(primes, limit)
    return math.fsum(lp * np.exp(-sigma * ms * lp))


# ---------------------------------------------------------------------------
# character sums for the class-number oracle


@njit
def periodic_harmonic_sum_nb(table, nterms):
    """sum_{n=1}^{nterms} table[n % q] / n, Kahan-compensated."""
    q = table.shape[0]
    s = 0.0
    c = 0.0
    r = 1 % q
    for n in range(1, nterms + 1):
        v = table[r]
        if v != 0:
            y = v / n - c
            t = s + y
            c = (t - s) - y
            s = t
        r += 1
        if r == q:
            r = 0
    return s


def periodic_harmonic_sum_np(table, nterms, chunk=1 << 22):
    q = len(table)
    parts = []
    for lo in range(1, nterms + 1, chunk):
        n = np.arange(lo, min(lo + chunk, nterms + 1), dtype=np.int64)
        parts.append(np.sum(table[n % q] / n))
    return math.fsum(parts)


if ENABLED:
    sieve_segment = sieve_segment_nb
    kronecker_at_primes = kronecker_at_primes_nb
    ddf_counts = ddf_counts_nb
    bsum_pair = bsum_pair_nb
    schoof_sum = schoof_sum_nb
    schoof_events = schoof_events_nb
    kahan_cumsum = kahan_cumsum_nb
    ideal_log_sum = ideal_log_sum_nb
    mangoldt_plateau_sum = mangoldt_plateau_sum_nb
    mangoldt_power_sum = mangoldt_power_sum_nb
    periodic_harmonic_sum = periodic_harmonic_sum_nb
else:
    sieve_segment = sieve_segment_np
    kronecker_at_primes = kronecker_at_primes_np
    ddf_counts = ddf_counts_np
    bsum_pair = bsum_pair_np
    schoof_sum = schoof_sum_np
    schoof_events = schoof_events_np
    kahan_cumsum = kahan_cumsum_np
    ideal_log_sum = ideal_log_sum_np
    mangoldt_plateau_sum = mangoldt_plateau_sum_np
    mangoldt_power_sum = mangoldt_power_sum_np
    periodic_harmonic_sum = periodic_harmonic_sum_np
