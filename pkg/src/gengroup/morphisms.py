"""Generalized subgroups, homomorphisms, kernels and isomorphism search.

Subgroup criteria:

* ``closure-and-inverse`` -- a*b in S for all a,b in S and inv(a) in S;
* ``quotient-criterion``  -- a*inv(b) in S for all a,b in S;
* ``normal``              -- quotient-criterion plus conjugation stability
  x*s*inv(x) in S for x, s in S (the quantification used by the kernel
  normality proof);
* ``normal-global``       -- quotient-criterion plus conjugation stability
  for every x in the ambient structure (the classical reading; kept as a
  separate criterion because certified non-group structures routinely fail
  it on kernels).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .certify import GGCertificate, certify
from .errors import (
    CertificationFailed,
    EmptySubset,
    ForeignIndices,
    IllDefined,
    NotHomomorphism,
    NotNormal,
    TooLarge,
    UnknownProperty,
)
from .tables import FiniteMagma, PropertyResult, Witness

SUBGROUP_CRITERIA = (
    "closure-and-inverse",
    "quotient-criterion",
    "normal",
    "normal-global",
)

HOM_ENUM_BOUND = 6
ISO_BOUND = 12
SUBSET_ENUM_BOUND = 16


@dataclass(frozen=True)
class Subset:
    """A nonempty subset of a certified structure, as increasing indices."""

    parent: GGCertificate
    members: tuple[int, ...]

    @staticmethod
    def of(parent: GGCertificate, indices) -> "Subset":
        members = tuple(sorted(set(int(i) for i in indices)))
        if not members:
            raise EmptySubset("subsets must be nonempty")
        n = parent.order
        if members[0] < 0 or members[-1] >= n:
            raise ForeignIndices(f"indices {members} out of range for order {n}")
        return Subset(parent, members)

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.parent.base.elements[i] for i in self.members)

    def describe(self) -> str:
        return f"{self.parent.name}[{','.join(map(str, self.members))}]"


@dataclass(frozen=True)
class Morphism:
    """A total map between two certified structures."""

    domain: GGCertificate
    codomain: GGCertificate
    map: tuple[int, ...]

    @staticmethod
    def of(domain: GGCertificate, codomain: GGCertificate, mapping) -> "Morphism":
        mp = tuple(int(v) for v in mapping)
        if len(mp) != domain.order:
            raise ForeignIndices(
                f"map length {len(mp)} does not match domain order {domain.order}"
            )
        if mp and (min(mp) < 0 or max(mp) >= codomain.order):
            raise ForeignIndices("map values outside codomain")
        return Morphism(domain, codomain, mp)

    def describe(self) -> str:
        return f"{self.domain.name}->{self.codomain.name}{list(self.map)}"

    def to_doc(self) -> dict:
        return {
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "map": list(self.map),
        }


def serialize_morphism(f: Morphism) -> str:
    return json.dumps(f.to_doc(), indent=2) + "\n"


def _require_member_of(cert: GGCertificate, s: Subset) -> None:
    if s.parent is not cert and s.parent != cert:
        raise ForeignIndices("subset belongs to a different structure")


def subgroup_test(cert: GGCertificate, s: Subset, criterion: str) -> PropertyResult:
    """Evaluate one subgroup criterion with a witness on failure."""
    if criterion not in SUBGROUP_CRITERIA:
        raise UnknownProperty(f"unknown subgroup criterion {criterion!r}")
    _require_member_of(cert, s)
    t = cert.base.table
    inv = cert.inv_map
    member = np.zeros(cert.order, dtype=bool)
    member[list(s.members)] = True

    if criterion == "closure-and-inverse":
        for a in s.members:
            for b in s.members:
                p = int(t[a, b])
                if not member[p]:
                    return PropertyResult(False, Witness("closure", (a, b), (p,)))
        for a in s.members:
            if not member[inv[a]]:
                return PropertyResult(False, Witness("inverse-closure", (a,), (inv[a],)))
        return PropertyResult(True)

    # quotient criterion underlies both normality variants
    for a in s.members:
        for b in s.members:
            p = int(t[a, inv[b]])
            if not member[p]:
                return PropertyResult(False, Witness("quotient-criterion", (a, b), (p,)))
    if criterion == "quotient-criterion":
        return PropertyResult(True)

    conj_range = s.members if criterion == "normal" else range(cert.order)
    for x in conj_range:
        for sm in s.members:
            c = int(t[t[x, sm], inv[x]])
            if not member[c]:
                return PropertyResult(False, Witness("conjugation", (x, sm), (c,)))
    return PropertyResult(True)


def _passes_quotient_criterion(t, inv, member_mask, members) -> bool:
    for a in members:
        for b in members:
            if not member_mask[t[a, inv[b]]]:
                return False
    return True


def enumerate_gsubgroups(cert: GGCertificate, max_size: int | None = None) -> list[Subset]:
    """All nonempty subsets passing the quotient criterion, by size then lex."""
    n = cert.order
    if n > SUBSET_ENUM_BOUND:
        raise TooLarge(f"subset enumeration bounded to order {SUBSET_ENUM_BOUND}")
    import itertools

    t = cert.base.table
    inv = cert.inv_map
    top = n if max_size is None else min(n, max_size)
    out = []
    mask = np.zeros(n, dtype=bool)
    for size in range(1, top + 1):
        for combo in itertools.combinations(range(n), size):
            mask[:] = False
            mask[list(combo)] = True
            if _passes_quotient_criterion(t, inv, mask, combo):
                out.append(Subset(cert, combo))
    return out


def is_homomorphism(f: Morphism) -> PropertyResult:
    """f(ab) == f(a)f(b) over all pairs; witness pair otherwise."""
    td = f.domain.base.table
    tc = f.codomain.base.table
    mp = np.asarray(f.map, dtype=np.int64)
    fab = mp[td]
    fafb = tc[mp[:, None], mp[None, :]]
    bad = fab != fafb
    if not bad.any():
        return PropertyResult(True)
    a, b = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return PropertyResult(
        False, Witness("hom", (int(a), int(b)), (int(fab[a, b]), int(fafb[a, b])))
    )


def _require_hom(f: Morphism) -> None:
    res = is_homomorphism(f)
    if not res.holds:
        raise NotHomomorphism(res.witness)


def enumerate_homomorphisms(g: GGCertificate, h: GGCertificate) -> list[Morphism]:
    """Every total map satisfying the homomorphism identity, in lex order.

    Exhaustive over |h| ** |g| candidates via backtracking with prefix
    pruning on the numba backend (full-space filter on the numpy backend).
    """
    if g.order > HOM_ENUM_BOUND or h.order > HOM_ENUM_BOUND:
        raise TooLarge(
            f"homomorphism enumeration bounded to order {HOM_ENUM_BOUND} on both sides"
        )
    fmaps = kernels.enumerate_homs(g.base.table, h.base.table)
    return [Morphism(g, h, tuple(int(v) for v in row)) for row in fmaps]


def kernel_at(f: Morphism, a: int) -> Subset:
    """{x : f(x) == f(e(a))} as a subset of the domain."""
    _require_hom(f)
    dom = f.domain
    if not 0 <= a < dom.order:
        raise ForeignIndices(f"point {a} outside domain of order {dom.order}")
    v = f.map[dom.e_map[a]]
    members = [x for x in range(dom.order) if f.map[x] == v]
    return Subset(dom, tuple(members))


def is_monomorphism(f: Morphism) -> PropertyResult:
    _require_hom(f)
    seen: dict[int, int] = {}
    for x, v in enumerate(f.map):
        if v in seen:
            return PropertyResult(
                False, Witness("not-injective", (seen[v], x), (v,))
            )
        seen[v] = x
    return PropertyResult(True)


def image_subset(f: Morphism, k: Subset) -> Subset:
    """{f(x) : x in K} as a subset of the codomain."""
    _require_hom(f)
    _require_member_of(f.domain, k)
    return Subset.of(f.codomain, (f.map[x] for x in k.members))


def union_f(f: Morphism) -> GGCertificate:
    """The induced structure on {(e(g), f(g))} with componentwise-read product.

    Requires the domain's normality flag; verifies representative
    independence exhaustively before building the table, then certifies.
    """
    _require_hom(f)
    dom, cod = f.domain, f.codomain
    if not dom.flags.normal:
        raise NotNormal("domain is not a normal generalized group")
    n = dom.order
    pairs = [(dom.e_map[g], f.map[g]) for g in range(n)]
    uniq = sorted(set(pairs))
    pos = {p: i for i, p in enumerate(uniq)}
    cls: dict[tuple[int, int], list[int]] = {p: [] for p in uniq}
    for g, p in enumerate(pairs):
        cls[p].append(g)

    table = np.zeros((len(uniq), len(uniq)), dtype=np.int64)
    td = dom.base.table
    for i, p in enumerate(uniq):
        for j, q in enumerate(uniq):
            base_pair = None
            base_ab = None
            for a in cls[p]:
                for b in cls[q]:
                    got = pairs[td[a, b]]
                    if base_pair is None:
                        base_pair = got
                        base_ab = (a, b)
                    elif got != base_pair:
                        raise IllDefined(
                            Witness("well-definedness", (base_ab[0], a, base_ab[1], b))
                        )
            table[i, j] = pos[base_pair]

    labels = [
        f"({dom.base.elements[e]},{cod.base.elements[v]})" for e, v in uniq
    ]
    m = FiniteMagma(f"Uf({dom.name}->{cod.name})", labels, table)
    cert = certify(m)
    if not isinstance(cert, GGCertificate):
        raise CertificationFailed(cert)
    return cert


def _signatures(cert: GGCertificate) -> list[tuple]:
    t = cert.base.table
    n = cert.order
    e = np.asarray(cert.e_map, dtype=np.int64)
    inv = np.asarray(cert.inv_map, dtype=np.int64)
    fiber = np.bincount(e, minlength=n)
    occur = np.bincount(t.ravel(), minlength=n)
    sigs = []
    for x in range(n):
        # order of x: least k >= 1 with x^k == e(x); powers cycle inside
        # the class of e(x), so n steps always suffice on certified input
        cur = x
        order = 0
        for k in range(1, n + 1):
            if cur == e[x]:
                order = k
                break
            cur = int(t[cur, x])
        sigs.append(
            (
                int(t[x, x] == x),
                int(e[x] == x),
                int(inv[x] == x),
                order,
                int(len(set(t[x].tolist()))),
                int(len(set(t[:, x].tolist()))),
                int(fiber[e[x]]),
                int(occur[x]),
            )
        )
    return sigs


def find_isomorphism(g: GGCertificate, h: GGCertificate) -> Morphism | None:
    """A bijective homomorphism g -> h, or None after exhausting the search.

    Backtracking over index bijections with invariant pruning (element
    signatures must match) and incremental product-consistency checks.
    """
    n = g.order
    if n != h.order:
        return None
    if n > ISO_BOUND:
        raise TooLarge(f"isomorphism search bounded to order {ISO_BOUND}")
    if g.flags != h.flags:
        return None
    sig_g = _signatures(g)
    sig_h = _signatures(h)
    if sorted(sig_g) != sorted(sig_h):
        return None
    tg = g.base.table
    th = h.base.table
    cands = [[y for y in range(n) if sig_h[y] == sig_g[x]] for x in range(n)]
    sigma = [-1] * n
    used = [False] * n

    def consistent(k: int) -> bool:
        for i in range(k + 1):
            p = tg[i, k]
            if p <= k and th[sigma[i], sigma[k]] != sigma[p]:
                return False
            p = tg[k, i]
            if p <= k and th[sigma[k], sigma[i]] != sigma[p]:
                return False
        for i in range(k):
            for j in range(k):
                if tg[i, j] == k and th[sigma[i], sigma[j]] != sigma[k]:
                    return False
        return True

    def extend(k: int) -> bool:
        if k == n:
            return True
        for y in cands[k]:
            if used[y]:
                continue
            sigma[k] = y
            used[y] = True
            if consistent(k) and extend(k + 1):
                return True
            used[y] = False
            sigma[k] = -1
        return False

    if not extend(0):
        return None
    f = Morphism(g, h, tuple(sigma))
    if not is_homomorphism(f).holds:  # defensive; the search guarantees it
        raise CertificationFailed(message="isomorphism search produced a non-homomorphism")
    return f


def sub_certificate(cert: GGCertificate, s: Subset) -> GGCertificate:
    """Certify the restriction of the table to a product-closed subset."""
    _require_member_of(cert, s)
    t = cert.base.table
    members = s.members
    pos = {m: i for i, m in enumerate(members)}
    k = len(members)
    sub = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            p = int(t[a, b])
            if p not in pos:
                raise CertificationFailed(
                    message=f"subset not closed: {a}*{b}={p} escapes"
                )
            sub[i, j] = pos[p]
    labels = [cert.base.elements[m] for m in members]
    name = f"{cert.name}[{','.join(map(str, members))}]"
    res = certify(FiniteMagma(name, labels, sub))
    if not isinstance(res, GGCertificate):
        raise CertificationFailed(res)
    return res
