"""Hot loops behind topology enumeration and the weak-reflection sweep.

Each kernel has a jit-compiled implementation and a vectorized numpy
fallback.  Setting TOPOLAB_NO_NUMBA (to anything nonempty) selects the
fallback, as does an unavailable numba.  Both implementations are kept
importable so the benchmark and the agreement tests can run them side by
side; the public names `topology_codes` and `reflection_counts` point at
the selected backend.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

_FORCE_FALLBACK = bool(os.environ.get("TOPOLAB_NO_NUMBA"))
BACKEND = "numpy" if njit is None or _FORCE_FALLBACK else "numba"


# -- topology enumeration --------------------------------------------
#
# A family of subsets of an n-point set is encoded as a code word whose
# bit s says whether subset-mask s belongs to the family.  A code is a
# topology iff bits 0 (empty set) and 2**n - 1 (whole set) are on and
# the on-bits are closed under union and intersection of masks.


def _topology_codes_numpy(n: int) -> np.ndarray:
    nsub = 1 << n
    full = nsub - 1
    codes = np.arange(1 << nsub, dtype=np.uint32)
    member = ((codes[:, None] >> np.arange(nsub, dtype=np.uint32)[None, :]) & 1).astype(bool)
    ok = member[:, 0] & member[:, full]
    for s in range(nsub):
        for t in range(s + 1, nsub):
            both = member[:, s] & member[:, t]
            ok &= ~both | (member[:, s | t] & member[:, s & t])
    return codes[ok]


def _topology_codes_py(n: int) -> np.ndarray:
    nsub = 1 << n
    full = nsub - 1
    total = 1 << nsub
    out = np.empty(total, dtype=np.uint32)
    count = 0
    for code in range(total):
        if not (code >> 0) & 1 or not (code >> full) & 1:
            continue
        good = True
        for s in range(nsub):
            if not (code >> s) & 1:
                continue
            for t in range(s + 1, nsub):
                if not (code >> t) & 1:
                    continue
                if not (code >> (s | t)) & 1 or not (code >> (s & t)) & 1:
                    good = False
                    break
            if not good:
                break
        if good:
            out[count] = code
            count += 1
    return out[:count]


# -- weak-reflection sweep -------------------------------------------
#
# For one (source space, target space) pair and the source's quotient
# (assign: source point -> class, with the quotient space's open-family
# bitmap), count over all point maps f: source -> target:
#   continuous:  every target open pulls back to a source open
#   factored:    some continuous F: quotient -> target has F(assign(x)) = f(x)
#   unique:      exactly one such F
# The quotient map is surjective, so a factoring F is pointwise forced by
# f; existence therefore reduces to f being constant on classes with the
# forced F continuous, and a factoring is automatically unique.  The
# exhaustive search over all F is kept, in pure python, as
# `reflection_counts_bruteforce` so the reduction itself stays under test.


def _reflection_counts_py(n_s: int, src_bitmap: np.ndarray,
                          n_q: int, q_bitmap: np.ndarray,
                          assign: np.ndarray,
                          n_t: int, tgt_opens: np.ndarray) -> np.ndarray:
    out = np.zeros(3, dtype=np.int64)
    if n_s == 0:
        # the empty map: continuous, factored through the empty quotient
        out[:] = 1
        return out
    if n_t == 0:
        return out
    f = np.zeros(n_s, dtype=np.int64)
    while True:
        cont = True
        for j in range(tgt_opens.shape[0]):
            o = tgt_opens[j]
            pre = 0
            for x in range(n_s):
                if (o >> f[x]) & 1:
                    pre |= 1 << x
            if not src_bitmap[pre]:
                cont = False
                break
        if cont:
            out[0] += 1
            forced = np.full(n_q, -1, dtype=np.int64)
            consistent = True
            for x in range(n_s):
                c = assign[x]
                if forced[c] == -1:
                    forced[c] = f[x]
                elif forced[c] != f[x]:
                    consistent = False
                    break
            if consistent:
                fcont = True
                for j in range(tgt_opens.shape[0]):
                    o = tgt_opens[j]
                    pre = 0
                    for c in range(n_q):
                        if (o >> forced[c]) & 1:
                            pre |= 1 << c
                    if not q_bitmap[pre]:
                        fcont = False
                        break
                if fcont:
                    out[1] += 1
                    out[2] += 1
        k = 0
        while k < n_s:
            f[k] += 1
            if f[k] < n_t:
                break
            f[k] = 0
            k += 1
        if k == n_s:
            break
    return out


def _reflection_counts_numpy(n_s: int, src_bitmap: np.ndarray,
                             n_q: int, q_bitmap: np.ndarray,
                             assign: np.ndarray,
                             n_t: int, tgt_opens: np.ndarray) -> np.ndarray:
    out = np.zeros(3, dtype=np.int64)
    if n_s == 0:
        out[:] = 1
        return out
    if n_t == 0:
        return out
    total = n_t ** n_s
    codes = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n_s), dtype=np.int64)
    rest = codes
    for x in range(n_s):
        digits[:, x] = rest % n_t
        rest = rest // n_t
    cont = np.ones(total, dtype=bool)
    for j in range(tgt_opens.shape[0]):
        o = int(tgt_opens[j])
        inside = (o >> digits) & 1
        pre = (inside << np.arange(n_s, dtype=np.int64)[None, :]).sum(axis=1)
        cont &= src_bitmap[pre]
    out[0] = int(cont.sum())
    # forced factor map: f must be constant on classes and the induced map continuous
    consistent = np.ones(total, dtype=bool)
    forced = np.zeros((total, n_q), dtype=np.int64)
    seen = np.zeros(n_q, dtype=bool)
    for x in range(n_s):
        c = int(assign[x])
        if not seen[c]:
            forced[:, c] = digits[:, x]
            seen[c] = True
        else:
            consistent &= forced[:, c] == digits[:, x]
    good = cont & consistent
    for j in range(tgt_opens.shape[0]):
        o = int(tgt_opens[j])
        inside = (o >> forced) & 1
        pre = (inside << np.arange(n_q, dtype=np.int64)[None, :]).sum(axis=1)
        good &= q_bitmap[pre]
    out[1] = out[2] = int(good.sum())
    return out


def reflection_counts_bruteforce(n_s: int, src_bitmap, n_q: int, q_bitmap,
                                 assign, n_t: int, tgt_opens) -> tuple[int, int, int]:
    """Reference implementation: try every factor map outright."""
    import itertools

    def continuous(npts, fmap, bitmap):
        for o in tgt_opens:
            pre = 0
            for x in range(npts):
                if (int(o) >> fmap[x]) & 1:
                    pre |= 1 << x
            if not bitmap[pre]:
                return False
        return True

    ncont = nfact = nuniq = 0
    for f in itertools.product(range(n_t), repeat=n_s):
        if not continuous(n_s, f, src_bitmap):
            continue
        ncont += 1
        hits = 0
        for big in itertools.product(range(n_t), repeat=n_q):
            if all(big[assign[x]] == f[x] for x in range(n_s)):
                if continuous(n_q, big, q_bitmap):
                    hits += 1
        nfact += 1 if hits >= 1 else 0
        nuniq += 1 if hits == 1 else 0
    return ncont, nfact, nuniq


if njit is not None:
    _topology_codes_jit = njit(cache=True)(_topology_codes_py)
    _reflection_counts_jit = njit(cache=True)(_reflection_counts_py)
else:  # pragma: no cover
    _topology_codes_jit = None
    _reflection_counts_jit = None

if BACKEND == "numba":
    topology_codes = _topology_codes_jit
    reflection_counts = _reflection_counts_jit
else:
    topology_codes = _topology_codes_numpy
    reflection_counts = _reflection_counts_numpy
