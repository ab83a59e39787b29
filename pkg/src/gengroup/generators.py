"""Certified test families: classical groups, zero semigroups, Rees matrix
structures, and the exhaustive small-order enumeration.

The enumeration walks the Rees parametrization (group, index sizes,
normalized sandwich matrix) rather than raw tables; completeness relative
to all finite generalized groups up to isomorphism rests on the standard
equivalence with completely simple semigroups and is an assumption, not a
verified result of this package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .certify import GGCertificate, certify
from .errors import CertificationFailed, TooLarge, UnsupportedParameter
from .morphisms import find_isomorphism
from .tables import FiniteMagma, check_property

GROUP_FAMILIES = ("cyclic", "dihedral", "symmetric", "klein")
ENUM_BOUND = 12


def _certify_or_die(m: FiniteMagma) -> GGCertificate:
    cert = certify(m)
    if not isinstance(cert, GGCertificate):
        raise CertificationFailed(cert, message=f"generator produced a bad table: {m.name}")
    return cert


def _table_from_perms(perms: list[tuple[int, ...]]) -> np.ndarray:
    idx = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    t = np.zeros((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            t[i, j] = idx[tuple(p[q[x]] for x in range(len(p)))]
    return t


def gen_group(family: str, n: int) -> GGCertificate:
    """A certified classical group: cyclic, dihedral (order 2n), symmetric
    (order n!), or the Klein four-group."""
    if family == "cyclic":
        if n < 1:
            raise UnsupportedParameter("cyclic order must be >= 1")
        t = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
        return _certify_or_die(FiniteMagma(f"Z{n}", [str(i) for i in range(n)], t))
    if family == "klein":
        if n != 4:
            raise UnsupportedParameter("the Klein four-group has order 4")
        t = np.arange(4)[:, None] ^ np.arange(4)[None, :]
        return _certify_or_die(FiniteMagma("K4", ["e", "a", "b", "c"], t))
    if family == "dihedral":
        if n < 3:
            raise UnsupportedParameter("dihedral parameter must be >= 3")
        rotations = [tuple((x + k) % n for x in range(n)) for k in range(n)]
        reflections = [tuple((k - x) % n for x in range(n)) for k in range(n)]
        perms = rotations + reflections
        labels = [f"r{k}" for k in range(n)] + [f"s{k}" for k in range(n)]
        return _certify_or_die(FiniteMagma(f"D{n}", labels, _table_from_perms(perms)))
    if family == "symmetric":
        if not 1 <= n <= 4:
            raise UnsupportedParameter("symmetric parameter must be in 1..4")
        perms = list(itertools.permutations(range(n)))
        labels = ["".join(map(str, p)) for p in perms]
        return _certify_or_die(FiniteMagma(f"S{n}", labels, _table_from_perms(perms)))
    raise UnsupportedParameter(f"unknown family {family!r}")


def gen_zero(side: str, n: int) -> GGCertificate:
    """Left-zero (x*y = x) or right-zero (x*y = y) semigroup of order n."""
    if side not in ("left", "right"):
        raise UnsupportedParameter("side must be 'left' or 'right'")
    if n < 1:
        raise UnsupportedParameter("order must be >= 1")
    if side == "left":
        t = np.repeat(np.arange(n), n).reshape(n, n)
        name = f"LZ{n}"
    else:
        t = np.tile(np.arange(n), n).reshape(n, n)
        name = f"RZ{n}"
    return _certify_or_die(FiniteMagma(name, [str(i) for i in range(n)], t))


def _group_identity(cert: GGCertificate) -> int:
    res = check_property(cert.base, "two-sided-identity")
    if not res.holds:
        raise UnsupportedParameter(f"{cert.name} has no two-sided identity")
    return res.witness.indices[0]


@dataclass(frozen=True)
class ReesSpec:
    """Parameters for a completely simple semigroup over a group.

    ``sandwich`` is an l_size x i_size matrix of group element indices.
    """

    group: GGCertificate
    i_size: int
    l_size: int
    sandwich: tuple[tuple[int, ...], ...]

    @staticmethod
    def of(group: GGCertificate, i_size: int, l_size: int, sandwich) -> "ReesSpec":
        if i_size < 1 or l_size < 1:
            raise UnsupportedParameter("index sizes must be positive")
        if not check_property(group.base, "latin-square").holds:
            raise UnsupportedParameter(f"{group.name} is not a group (no latin square)")
        _group_identity(group)
        rows = tuple(tuple(int(v) for v in row) for row in sandwich)
        if len(rows) != l_size or any(len(r) != i_size for r in rows):
            raise UnsupportedParameter(
                f"sandwich must be {l_size}x{i_size}, got {[len(r) for r in rows]}"
            )
        ng = group.order
        if any(v < 0 or v >= ng for r in rows for v in r):
            raise UnsupportedParameter("sandwich entries must index the group")
        return ReesSpec(group, i_size, l_size, rows)

    @property
    def normalized(self) -> bool:
        """First row and first column of the sandwich are the identity."""
        ident = _group_identity(self.group)
        return all(v == ident for v in self.sandwich[0]) and all(
            row[0] == ident for row in self.sandwich
        )

    @property
    def order(self) -> int:
        return self.group.order * self.i_size * self.l_size

    def describe(self) -> str:
        flat = ",".join(str(v) for row in self.sandwich for v in row)
        return f"Rees({self.group.name},{self.i_size}x{self.l_size},[{flat}])"


def gen_rees(spec: ReesSpec) -> GGCertificate:
    """Certified Rees structure: triples (i, g, l) with product
    (i, g, l)*(j, h, m) = (i, g*p[l][j]*h, m), lexicographic element order.

    The expected identity and inverse maps fall out of certification; they
    are re-verified there, not trusted from the construction.
    """
    g = spec.group
    tg = g.base.table
    ng = g.order
    triples = [
        (i, gg, lam)
        for i in range(spec.i_size)
        for gg in range(ng)
        for lam in range(spec.l_size)
    ]
    pos = {tr: k for k, tr in enumerate(triples)}
    n = len(triples)
    t = np.zeros((n, n), dtype=np.int64)
    p = spec.sandwich
    for a, (i, gg, lam) in enumerate(triples):
        for b, (j, hh, mu) in enumerate(triples):
            t[a, b] = pos[(i, int(tg[tg[gg, p[lam][j]], hh]), mu)]
    labels = [
        f"({i},{g.base.elements[gg]},{lam})" for i, gg, lam in triples
    ]
    return _certify_or_die(FiniteMagma(spec.describe(), labels, t))


def rees_expected_maps(spec: ReesSpec) -> tuple[list[int], list[int]]:
    """The analytic e-map and inverse map (i, inv(p[l][i]), l) etc., as
    indices in gen_rees element order; used to cross-check certification."""
    g = spec.group
    cert_inv = g.inv_map
    tg = g.base.table
    triples = [
        (i, gg, lam)
        for i in range(spec.i_size)
        for gg in range(g.order)
        for lam in range(spec.l_size)
    ]
    pos = {tr: k for k, tr in enumerate(triples)}
    e_map, inv_map = [], []
    for (i, gg, lam) in triples:
        pli = spec.sandwich[lam][i]
        pinv = cert_inv[pli]
        e_map.append(pos[(i, pinv, lam)])
        inv_map.append(pos[(i, int(tg[tg[pinv, cert_inv[gg]], pinv]), lam)])
    return e_map, inv_map


def _candidate_groups(max_order: int) -> list[tuple[int, GGCertificate]]:
    """(family_rank, certificate) for every classical group up to max_order."""
    out: list[tuple[int, GGCertificate]] = []
    for n in range(1, max_order + 1):
        out.append((0, gen_group("cyclic", n)))
    if max_order >= 4:
        out.append((1, gen_group("klein", 4)))
    for n in range(3, max_order // 2 + 1):
        out.append((2, gen_group("dihedral", n)))
    for n in (3, 4):
        if math.factorial(n) <= max_order:
            out.append((3, gen_group("symmetric", n)))
    return out


def _normalized_sandwiches(group: GGCertificate, i_size: int, l_size: int):
    """All sandwich matrices with identity first row/column, lexicographic."""
    ident = _group_identity(group)
    free = (i_size - 1) * (l_size - 1)
    for combo in itertools.product(range(group.order), repeat=free):
        rows = [[ident] * i_size for _ in range(l_size)]
        it = iter(combo)
        for lam in range(1, l_size):
            for i in range(1, i_size):
                rows[lam][i] = next(it)
        yield tuple(tuple(r) for r in rows)


def enumerate_gg(max_order: int) -> list[GGCertificate]:
    """Every Rees-parametrized structure of order <= max_order over the
    classical group families, deduplicated up to isomorphism."""
    if max_order > ENUM_BOUND:
        raise TooLarge(f"enumeration bounded to order {ENUM_BOUND}")
    if max_order < 1:
        return []
    candidates: list[tuple[tuple, GGCertificate, bool]] = []
    for rank, group in _candidate_groups(max_order):
        ng = group.order
        for i_size in range(1, max_order // ng + 1):
            for l_size in range(1, max_order // (ng * i_size) + 1):
                for sandwich in _normalized_sandwiches(group, i_size, l_size):
                    total = ng * i_size * l_size
                    key = (
                        total,
                        -ng,
                        l_size,
                        i_size,
                        rank,
                        tuple(v for row in sandwich for v in row),
                    )
                    degenerate = i_size == 1 and l_size == 1
                    candidates.append((key, group if degenerate else None, degenerate)
                                      + ((i_size, l_size, sandwich, group),))
    candidates.sort(key=lambda c: c[0])

    kept: list[GGCertificate] = []
    for key, direct, degenerate, params in candidates:
        if degenerate:
            cert = direct
        else:
            i_size, l_size, sandwich, group = params
            cert = gen_rees(ReesSpec.of(group, i_size, l_size, sandwich))
        duplicate = False
        for other in kept:
            if other.order == cert.order and find_isomorphism(cert, other) is not None:
                duplicate = True
                break
        if not duplicate:
            kept.append(cert)
    return kept
