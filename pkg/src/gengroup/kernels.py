"""Dense Cayley-table scan kernels with two interchangeable backends.

The quantifier sweeps behind every property check (associativity over n^3
triples, the right Bol identity, cancellation, homomorphism enumeration and
batch kernel auditing) are the hot loops of this package.  They exist twice:

* ``numba`` -- ``@njit``-compiled loops, the default whenever numba imports;
* ``numpy`` -- vectorized equivalents, the fallback path.

Select with the ``GENGROUP_KERNELS`` environment variable (``numba``,
``numpy`` or ``auto``) or :func:`set_backend` at runtime.  Both backends
return bit-identical results: every witness is the first violation in
row-major (lexicographic) scan order.  ``benchmarks/bench_kernels.py``
times one against the other.

Tables are square ``int64`` arrays whose entries index their own axis.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "backend",
    "set_backend",
    "available_backends",
    "first_assoc_violation",
    "first_comm_violation",
    "first_left_cancel_violation",
    "first_right_cancel_violation",
    "first_idem_violation",
    "first_right_bol_violation",
    "first_latin_row_violation",
    "first_latin_col_violation",
    "enumerate_homs",
    "hom_property_bits",
    "BIT_INJECTIVE",
    "BIT_KERNELS_SUBGROUP",
    "BIT_KERNELS_GLOBAL_CONJ",
    "BIT_KERNELS_POINTWISE_TRIVIAL",
    "BIT_KERNELS_AGGREGATE_TRIVIAL",
]

# Bits produced by hom_property_bits, identical across backends.
BIT_INJECTIVE = 1
BIT_KERNELS_SUBGROUP = 2            # every kernel closed under u*inv(w) and self-conjugation
BIT_KERNELS_GLOBAL_CONJ = 4         # every kernel stable under conjugation by the whole domain
BIT_KERNELS_POINTWISE_TRIVIAL = 8   # kernel at a == idempotents mapped to f(e(a))
BIT_KERNELS_AGGREGATE_TRIVIAL = 16  # kernel at a == full set of local identities

_NONE1 = np.full(1, -1, dtype=np.int64)
_NONE2 = np.full(2, -1, dtype=np.int64)
_NONE3 = np.full(3, -1, dtype=np.int64)


def _as_table(t) -> np.ndarray:
    return np.ascontiguousarray(t, dtype=np.int64)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _np_assoc(t):
    n = t.shape[0]
    for i in range(n):
        lhs = t[t[i], :]   # lhs[j, k] = (i*j)*k
        rhs = t[i, t]      # rhs[j, k] = i*(j*k)
        bad = lhs != rhs
        if bad.any():
            j, k = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return np.array([i, j, k], dtype=np.int64)
    return _NONE3


def _np_comm(t):
    bad = t != t.T
    if not bad.any():
        return _NONE2
    i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return np.array([i, j], dtype=np.int64)


def _first_dup_pair(row: np.ndarray):
    # lexicographically smallest (x, y), x < y, with row[x] == row[y]
    n = row.shape[0]
    eq = row[:, None] == row[None, :]
    eq &= np.triu(np.ones((n, n), dtype=bool), k=1)
    if not eq.any():
        return None
    x, y = np.unravel_index(int(np.argmax(eq)), eq.shape)
    return int(x), int(y)


def _np_left_cancel(t):
    n = t.shape[0]
    for a in range(n):
        pair = _first_dup_pair(t[a])
        if pair is not None:
            return np.array([a, pair[0], pair[1]], dtype=np.int64)
    return _NONE3


def _np_right_cancel(t):
    n = t.shape[0]
    tt = t.T
    for a in range(n):
        pair = _first_dup_pair(tt[a])
        if pair is not None:
            return np.array([a, pair[0], pair[1]], dtype=np.int64)
    return _NONE3


def _np_idem(t):
    n = t.shape[0]
    bad = np.diagonal(t) != np.arange(n)
    if not bad.any():
        return _NONE1
    return np.array([int(np.argmax(bad))], dtype=np.int64)


def _np_bol(t):
    n = t.shape[0]
    col = np.arange(n)[:, None]
    b = t[t, col]                # b[y, z] = (y*z)*y
    for x in range(n):
        a2 = t[t[x], :]          # a2[y, z] = (x*y)*z
        lhs = t[a2, col]         # lhs[y, z] = ((x*y)*z)*y
        rhs = t[x][b]            # rhs[y, z] = x*((y*z)*y)
        bad = lhs != rhs
        if bad.any():
            y, z = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return np.array([x, y, z], dtype=np.int64)
    return _NONE3


def _np_latin_row(t):
    n = t.shape[0]
    ok = (np.sort(t, axis=1) == np.arange(n)).all(axis=1)
    if ok.all():
        return _NONE3
    a = int(np.argmax(~ok))
    x, y = _first_dup_pair(t[a])
    return np.array([a, x, y], dtype=np.int64)


def _np_latin_col(t):
    res = _np_latin_row(np.ascontiguousarray(t.T))
    return res


def _np_enumerate_homs(td, tc):
    n = td.shape[0]
    m = tc.shape[0]
    total = m**n
    powers = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    fmaps = (np.arange(total, dtype=np.int64)[:, None] // powers) % m
    rows = np.repeat(np.arange(n), n)
    cols = np.tile(np.arange(n), n)
    f_ab = fmaps[:, td.ravel()]
    fa_fb = tc[fmaps[:, rows], fmaps[:, cols]]
    keep = (f_ab == fa_fb).all(axis=1)
    return np.ascontiguousarray(fmaps[keep])


def _np_hom_bits(fmaps, td, inv, e, ncod):
    m_count, n = fmaps.shape
    out = np.zeros(m_count, dtype=np.uint8)
    if m_count == 0:
        return out
    is_e = np.zeros(n, dtype=bool)
    is_e[e] = True
    idem = e == np.arange(n)

    srt = np.sort(fmaps, axis=1)
    if n > 1:
        inj = (srt[:, 1:] != srt[:, :-1]).all(axis=1)
    else:
        inj = np.ones(m_count, dtype=bool)

    vals = fmaps[:, e]                                  # f(e(a)) per point a
    member = fmaps[:, None, :] == vals[:, :, None]      # member[m, a, x]

    quot = td[:, inv]                                   # u, w -> u * inv(w)
    conj = td[td, inv[np.arange(n)][:, None]]           # u, w -> (u*w)*inv(u)

    sub_bad = np.zeros(m_count, dtype=bool)
    glob_bad = np.zeros(m_count, dtype=bool)
    for u in range(n):
        mu = member[:, :, u]
        for w in range(n):
            both = mu & member[:, :, w]
            sub_bad |= (
                both & ~(member[:, :, quot[u, w]] & member[:, :, conj[u, w]])
            ).any(axis=1)
            # global: u ranges over the whole domain, only w must belong
            glob_bad |= (member[:, :, w] & ~member[:, :, conj[u, w]]).any(axis=1)

    pointwise = ~(member & ~idem[None, None, :]).any(axis=(1, 2))
    aggregate = (member == is_e[None, None, :]).all(axis=(1, 2))

    out |= np.where(inj, BIT_INJECTIVE, 0).astype(np.uint8)
    out |= np.where(~sub_bad, BIT_KERNELS_SUBGROUP, 0).astype(np.uint8)
    out |= np.where(~glob_bad, BIT_KERNELS_GLOBAL_CONJ, 0).astype(np.uint8)
    out |= np.where(pointwise, BIT_KERNELS_POINTWISE_TRIVIAL, 0).astype(np.uint8)
    out |= np.where(aggregate, BIT_KERNELS_AGGREGATE_TRIVIAL, 0).astype(np.uint8)
    return out


_NUMPY_IMPL = {
    "assoc": _np_assoc,
    "comm": _np_comm,
    "left_cancel": _np_left_cancel,
    "right_cancel": _np_right_cancel,
    "idem": _np_idem,
    "bol": _np_bol,
    "latin_row": _np_latin_row,
    "latin_col": _np_latin_col,
    "enum_homs": _np_enumerate_homs,
    "hom_bits": _np_hom_bits,
}


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via GENGROUP_KERNELS=numpy
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _nb_assoc(t):
        n = t.shape[0]
        out = np.full(3, -1, np.int64)
        for i in range(n):
            for j in range(n):
                ij = t[i, j]
                for k in range(n):
                    if t[ij, k] != t[i, t[j, k]]:
                        out[0] = i
                        out[1] = j
                        out[2] = k
                        return out
        return out

    @njit(cache=True)
    def _nb_comm(t):
        n = t.shape[0]
        out = np.full(2, -1, np.int64)
        for i in range(n):
            for j in range(n):
                if t[i, j] != t[j, i]:
                    out[0] = i
                    out[1] = j
                    return out
        return out

    @njit(cache=True)
    def _nb_left_cancel(t):
        n = t.shape[0]
        out = np.full(3, -1, np.int64)
        for a in range(n):
            for x in range(n):
                v = t[a, x]
                for y in range(x + 1, n):
                    if t[a, y] == v:
                        out[0] = a
                        out[1] = x
                        out[2] = y
                        return out
        return out

    @njit(cache=True)
    def _nb_right_cancel(t):
        n = t.shape[0]
        out = np.full(3, -1, np.int64)
        for a in range(n):
            for x in range(n):
                v = t[x, a]
                for y in range(x + 1, n):
                    if t[y, a] == v:
                        out[0] = a
                        out[1] = x
                        out[2] = y
                        return out
        return out

    @njit(cache=True)
    def _nb_idem(t):
        n = t.shape[0]
        out = np.full(1, -1, np.int64)
        for x in range(n):
            if t[x, x] != x:
                out[0] = x
                return out
        return out

    @njit(cache=True)
    def _nb_bol(t):
        n = t.shape[0]
        out = np.full(3, -1, np.int64)
        for x in range(n):
            for y in range(n):
                xy = t[x, y]
                for z in range(n):
                    if t[t[xy, z], y] != t[x, t[t[y, z], y]]:
                        out[0] = x
                        out[1] = y
                        out[2] = z
                        return out
        return out

    @njit(cache=True)
    def _nb_latin_scan(t):
        # first row that is not a permutation, then its smallest duplicate pair
        n = t.shape[0]
        out = np.full(3, -1, np.int64)
        counts = np.zeros(n, np.int64)
        for a in range(n):
            counts[:] = 0
            dup = False
            for x in range(n):
                counts[t[a, x]] += 1
                if counts[t[a, x]] > 1:
                    dup = True
            if dup:
                for x in range(n):
                    v = t[a, x]
                    for y in range(x + 1, n):
                        if t[a, y] == v:
                            out[0] = a
                            out[1] = x
                            out[2] = y
                            return out
        return out

    def _nb_latin_row(t):
        return _nb_latin_scan(t)

    def _nb_latin_col(t):
        return _nb_latin_scan(np.ascontiguousarray(t.T))

    @njit(cache=True)
    def _nb_enumerate_homs(td, tc):
        n = td.shape[0]
        m = tc.shape[0]
        cap = 1
        for _ in range(n):
            cap *= m
        out = np.empty((cap, n), np.int64)
        cnt = 0
        f = np.full(n, -1, np.int64)
        k = 0
        while k >= 0:
            f[k] += 1
            if f[k] == m:
                f[k] = -1
                k -= 1
                continue
            ok = True
            for i in range(k + 1):
                p = td[i, k]
                if p <= k and tc[f[i], f[k]] != f[p]:
                    ok = False
                    break
                p = td[k, i]
                if p <= k and tc[f[k], f[i]] != f[p]:
                    ok = False
                    break
            if ok:
                for i in range(k):
                    for j in range(k):
                        if td[i, j] == k and tc[f[i], f[j]] != f[k]:
                            ok = False
                            break
                    if not ok:
                        break
            if not ok:
                continue
            if k == n - 1:
                out[cnt] = f
                cnt += 1
            else:
                k += 1
        return out[:cnt]

    @njit(cache=True)
    def _nb_hom_bits(fmaps, td, inv, e, ncod):
        m_count, n = fmaps.shape
        out = np.zeros(m_count, np.uint8)
        is_e = np.zeros(n, np.uint8)
        for g in range(n):
            is_e[e[g]] = 1
        seen = np.zeros(ncod, np.uint8)
        member = np.zeros(n, np.uint8)
        for mi in range(m_count):
            f = fmaps[mi]
            seen[:] = 0
            inj = True
            for x in range(n):
                if seen[f[x]] == 1:
                    inj = False
                    break
                seen[f[x]] = 1
            sub_ok = True
            glob_ok = True
            pointwise = True
            aggregate = True
            for a in range(n):
                v = f[e[a]]
                for x in range(n):
                    member[x] = 1 if f[x] == v else 0
                for u in range(n):
                    for w in range(n):
                        if member[w] == 0:
                            continue
                        conj = td[td[u, w], inv[u]]
                        if member[conj] == 0:
                            glob_ok = False
                        if member[u] == 1:
                            if member[td[u, inv[w]]] == 0 or member[conj] == 0:
                                sub_ok = False
                for x in range(n):
                    in_a = 1 if (e[x] == x and f[x] == v) else 0
                    if in_a != member[x]:
                        pointwise = False
                    if is_e[x] != member[x]:
                        aggregate = False
            bits = 0
            if inj:
                bits |= 1
            if sub_ok:
                bits |= 2
            if glob_ok:
                bits |= 4
            if pointwise:
                bits |= 8
            if aggregate:
                bits |= 16
            out[mi] = bits
        return out

    _NUMBA_IMPL = {
        "assoc": _nb_assoc,
        "comm": _nb_comm,
        "left_cancel": _nb_left_cancel,
        "right_cancel": _nb_right_cancel,
        "idem": _nb_idem,
        "bol": _nb_bol,
        "latin_row": _nb_latin_row,
        "latin_col": _nb_latin_col,
        "enum_homs": _nb_enumerate_homs,
        "hom_bits": _nb_hom_bits,
    }


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

_BACKENDS = {"numpy": _NUMPY_IMPL}
if _HAVE_NUMBA:
    _BACKENDS["numba"] = _NUMBA_IMPL


def _resolve(name: str) -> str:
    name = name.strip().lower()
    if name == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r} (use numba, numpy or auto)")
    if name == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("GENGROUP_KERNELS=numba requested but numba is not importable")
    return name


_ACTIVE = _resolve(os.environ.get("GENGROUP_KERNELS", "auto"))


def backend() -> str:
    """Name of the active kernel backend."""
    return _ACTIVE


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> str:
    """Switch backends at runtime; returns the resolved name."""
    global _ACTIVE
    _ACTIVE = _resolve(name)
    return _ACTIVE


def _call(fn: str, *args):
    return _BACKENDS[_ACTIVE][fn](*args)


def _tup(res: np.ndarray):
    if res[0] < 0:
        return None
    return tuple(int(v) for v in res)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def first_assoc_violation(table) -> tuple[int, int, int] | None:
    """First (i, j, k) with (i*j)*k != i*(j*k), or None."""
    return _tup(_call("assoc", _as_table(table)))


def first_comm_violation(table) -> tuple[int, int] | None:
    return _tup(_call("comm", _as_table(table)))


def first_left_cancel_violation(table) -> tuple[int, int, int] | None:
    """First (a, x, y), x < y, with a*x == a*y."""
    return _tup(_call("left_cancel", _as_table(table)))


def first_right_cancel_violation(table) -> tuple[int, int, int] | None:
    """First (a, x, y), x < y, with x*a == y*a."""
    return _tup(_call("right_cancel", _as_table(table)))


def first_idem_violation(table) -> int | None:
    res = _call("idem", _as_table(table))
    return None if res[0] < 0 else int(res[0])


def first_right_bol_violation(table) -> tuple[int, int, int] | None:
    """First (x, y, z) with ((x*y)*z)*y != x*((y*z)*y)."""
    return _tup(_call("bol", _as_table(table)))


def first_latin_row_violation(table) -> tuple[int, int, int] | None:
    """First row a that is not a permutation, as (a, x, y) with a*x == a*y."""
    return _tup(_call("latin_row", _as_table(table)))


def first_latin_col_violation(table) -> tuple[int, int, int] | None:
    """First column a that is not a permutation, as (a, x, y) with x*a == y*a."""
    return _tup(_call("latin_col", _as_table(table)))


def enumerate_homs(table_dom, table_cod) -> np.ndarray:
    """All maps f with f(a*b) == f(a)*f(b), one per row, in lexicographic order.

    The search space is |cod| ** |dom|; callers enforce size bounds.
    """
    return _call("enum_homs", _as_table(table_dom), _as_table(table_cod))


def hom_property_bits(fmaps, table_dom, inv_dom, e_dom, n_cod) -> np.ndarray:
    """Per-homomorphism audit bits (see BIT_* constants).

    ``fmaps`` is an (M, n) array of maps out of the domain whose table,
    inverse map and identity map are given.  Kernels are the fibres
    {x : f(x) == f(e(a))} for each point a.
    """
    fm = np.ascontiguousarray(fmaps, dtype=np.int64)
    return _call(
        "hom_bits",
        fm,
        _as_table(table_dom),
        np.ascontiguousarray(inv_dom, dtype=np.int64),
        np.ascontiguousarray(e_dom, dtype=np.int64),
        int(n_cod),
    )
