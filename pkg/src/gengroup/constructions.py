"""The four table constructions and the Bol/quasigroup/loop classifier.

* direct product on pairs, componentwise;
* quotient by left cosets with an exhaustive representative-independence
  check (cosets are allowed to overlap or miss elements; a partition flag
  is attached for reporting);
* internal direct product with explicit hypothesis checks;
* the twisted pair product (h1,g1)*(h2,g2) = (h1*h2, h2*g1*inv(h2)*g2) on
  H x G for a subset H that forms a group under the restricted operation.

Pair elements are ordered lexicographically, first component major, and
labelled "(a,b)" from the component labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .certify import GGCertificate, certify
from .errors import (
    CertificationFailed,
    ConclusionFailed,
    HypothesisFailed,
    IllDefinedProduct,
    NotGroupSubset,
    NotSubgroup,
    TooLarge,
)
from .morphisms import Morphism, Subset, is_homomorphism, sub_certificate, subgroup_test
from .tables import FiniteMagma, PropertyResult, Witness, check_property

BOL_SCAN_BOUND = 256

CLASSIFICATION_LABELS = (
    "groupoid",
    "quasigroup",
    "Bol groupoid",
    "Bol quasigroup with left identity",
    "Bol loop",
)


@dataclass(frozen=True)
class CosetFamily:
    parent: GGCertificate
    subgroup: Subset
    cosets: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    partitions: bool

    def to_doc(self) -> dict:
        return {
            "subgroup": list(self.subgroup.members),
            "cosets": [list(c) for c in self.cosets],
            "representatives": list(self.representatives),
            "partitions": self.partitions,
        }


@dataclass(frozen=True)
class BolReport:
    associative: PropertyResult
    right_bol: PropertyResult
    latin_square: PropertyResult
    left_identities: tuple[int, ...]
    loop: bool
    classification: str

    def to_doc(self) -> dict:
        return {
            "associative": self.associative.to_doc(),
            "right_bol": self.right_bol.to_doc(),
            "latin_square": self.latin_square.to_doc(),
            "left_identities": list(self.left_identities),
            "loop": self.loop,
            "classification": self.classification,
        }


def _pair_labels(a: FiniteMagma, b: FiniteMagma) -> list[str]:
    return [f"({la},{lb})" for la in a.elements for lb in b.elements]


def direct_product(g: GGCertificate, h: GGCertificate) -> GGCertificate:
    """Componentwise product on pairs; the result is re-certified."""
    ng, nh = g.order, h.order
    tg, th = g.base.table, h.base.table
    # table over pair indices p = i*nh + j
    big = (tg[:, None, :, None] * nh + th[None, :, None, :]).reshape(ng * nh, ng * nh)
    m = FiniteMagma(
        f"({g.name}x{h.name})", _pair_labels(g.base, h.base), big
    )
    cert = certify(m)
    if not isinstance(cert, GGCertificate):
        raise CertificationFailed(cert)
    return cert


def quotient(cert: GGCertificate, s: Subset) -> tuple[GGCertificate, CosetFamily]:
    """Left-coset quotient with exhaustive well-definedness verification."""
    crit = subgroup_test(cert, s, "quotient-criterion")
    if not crit.holds:
        raise NotSubgroup(crit.witness)
    t = cert.base.table
    n = cert.order
    members = list(s.members)

    coset_of: list[int] = []
    cosets: list[tuple[int, ...]] = []
    reps: list[int] = []
    seen: dict[tuple[int, ...], int] = {}
    for a in range(n):
        c = tuple(sorted({int(t[a, hh]) for hh in members}))
        if c not in seen:
            seen[c] = len(cosets)
            cosets.append(c)
            reps.append(a)
        coset_of.append(seen[c])

    # representative independence: generators with equal cosets and all
    # members of each coset must land in the same product coset
    k = len(cosets)
    gens: list[list[int]] = [[] for _ in range(k)]
    for a in range(n):
        gens[coset_of[a]].append(a)
    lefts = [sorted(set(gens[i]) | set(cosets[i])) for i in range(k)]

    table = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            base = coset_of[t[reps[i], reps[j]]]
            for a in lefts[i]:
                for b in lefts[j]:
                    if coset_of[t[a, b]] != base:
                        raise IllDefinedProduct(
                            Witness("well-definedness", (reps[i], a, reps[j], b))
                        )
            table[i, j] = base

    labels = [
        "{" + ",".join(cert.base.elements[x] for x in c) + "}" for c in cosets
    ]
    name = f"{cert.name}/{{{','.join(cert.base.elements[x] for x in members)}}}"
    qm = FiniteMagma(name, labels, table)
    qcert = certify(qm)
    if not isinstance(qcert, GGCertificate):
        raise CertificationFailed(qcert)

    covered = sorted(x for c in cosets for x in c)
    partitions = covered == list(range(n))
    fam = CosetFamily(
        parent=cert,
        subgroup=s,
        cosets=tuple(cosets),
        representatives=tuple(reps),
        partitions=partitions,
    )
    return qcert, fam


def _is_centralizing(t: np.ndarray, ns: Subset, hs: Subset) -> Witness | None:
    for a in ns.members:
        for b in hs.members:
            if t[a, b] != t[b, a]:
                return Witness("centralizer", (a, b), (int(t[a, b]), int(t[b, a])))
    return None


def internal_dp(cert: GGCertificate, ns: Subset, hs: Subset) -> Morphism:
    """Decompose the structure as an internal direct product of N and H.

    Hypotheses, checked in order: N and H pass the quotient criterion and
    are abelian as substructures; every element factors as n*h; members of
    N commute with members of H (centralizer reading).  The decomposition's
    uniqueness and the bijectivity/homomorphy of the induced map are the
    claimed conclusion; their failure raises ConclusionFailed.
    """
    for sub, tag in ((ns, "N"), (hs, "H")):
        res = subgroup_test(cert, sub, "quotient-criterion")
        if not res.holds:
            raise NotSubgroup(res.witness)
    sub_n = sub_certificate(cert, ns)
    sub_h = sub_certificate(cert, hs)
    if not sub_n.flags.abelian:
        raise HypothesisFailed(
            "N-abelian", check_property(sub_n.base, "commutative").witness
        )
    if not sub_h.flags.abelian:
        raise HypothesisFailed(
            "H-abelian", check_property(sub_h.base, "commutative").witness
        )

    t = cert.base.table
    n = cert.order
    decomp: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in ns.members:
        for b in hs.members:
            decomp[int(t[a, b])].append((a, b))
    for x in range(n):
        if not decomp[x]:
            raise HypothesisFailed("G=NH", Witness("g-equals-nh", (x,)))

    wit = _is_centralizing(t, ns, hs)
    if wit is not None:
        raise HypothesisFailed("centralizer", wit)

    for x in range(n):
        if len(decomp[x]) > 1:
            (n1, h1), (n2, h2) = decomp[x][0], decomp[x][1]
            raise ConclusionFailed(
                Witness("decomposition-uniqueness", (x, n1, h1), (n2, h2)),
                message=f"element {x} factors as {n1}*{h1} and {n2}*{h2}",
            )

    prod = direct_product(sub_n, sub_h)
    npos = {m: i for i, m in enumerate(ns.members)}
    hpos = {m: i for i, m in enumerate(hs.members)}
    mapping = []
    for x in range(n):
        a, b = decomp[x][0]
        mapping.append(npos[a] * len(hs.members) + hpos[b])
    f = Morphism(cert, prod, tuple(mapping))
    if len(set(mapping)) != n or prod.order != n:
        raise ConclusionFailed(message="induced map is not a bijection")
    res = is_homomorphism(f)
    if not res.holds:
        raise ConclusionFailed(res.witness, message="induced map is not a homomorphism")
    return f


def group_subset_check(cert: GGCertificate, s: Subset) -> Witness | None:
    """None if S is a group under the restricted operation, else a witness.

    Requires the quotient criterion, a single two-sided identity inside S,
    and the restricted table to be a latin square.
    """
    res = subgroup_test(cert, s, "quotient-criterion")
    if not res.holds:
        return res.witness
    try:
        sub = sub_certificate(cert, s)
    except CertificationFailed:
        return Witness("closure", (s.members[0],))
    ident = check_property(sub.base, "two-sided-identity")
    if not ident.holds:
        return Witness("identity-existence", (s.members[0],))
    latin = check_property(sub.base, "latin-square")
    if not latin.holds:
        return latin.witness
    return None


def bol_product(cert: GGCertificate, s: Subset) -> FiniteMagma:
    """The twisted product on H x G; classification is classify_bol's job.

    All products and the inverse of the second component's H part are taken
    in the ambient table / inverse map.
    """
    wit = group_subset_check(cert, s)
    if wit is not None:
        raise NotGroupSubset(wit, reason=wit.kind)
    t = cert.base.table
    inv = cert.inv_map
    n = cert.order
    hs = list(s.members)
    pairs = [(a, g) for a in hs for g in range(n)]
    pos = {p: i for i, p in enumerate(pairs)}
    size = len(pairs)
    table = np.zeros((size, size), dtype=np.int64)
    for i1, (h1, g1) in enumerate(pairs):
        for i2, (h2, g2) in enumerate(pairs):
            first = int(t[h1, h2])
            second = int(t[t[t[h2, g1], inv[h2]], g2])
            table[i1, i2] = pos[(first, second)]
    labels = [
        f"({cert.base.elements[a]},{cert.base.elements[g]})" for a, g in pairs
    ]
    name = f"Bol({cert.name};{{{','.join(cert.base.elements[a] for a in hs)}}})"
    return FiniteMagma(name, labels, table)


def _classification(latin: bool, bol: bool, loop: bool) -> str:
    if latin and bol:
        return "Bol loop" if loop else "Bol quasigroup with left identity"
    if bol:
        return "Bol groupoid"
    if latin:
        return "quasigroup"
    return "groupoid"


def classify_bol(m: FiniteMagma) -> BolReport:
    """Full scan: associativity, right Bol identity, latin square, identities."""
    n = m.order
    if n > BOL_SCAN_BOUND:
        raise TooLarge(f"Bol scan bounded to order {BOL_SCAN_BOUND}")
    assoc = check_property(m, "associative")
    t = m.table
    hit = kernels.first_right_bol_violation(t)
    if hit is None:
        bol = PropertyResult(True)
    else:
        x, y, z = hit
        bol = PropertyResult(
            False,
            Witness(
                "right-bol",
                hit,
                (int(t[t[t[x, y], z], y]), int(t[x, t[t[y, z], y]])),
            ),
        )
    latin = check_property(m, "latin-square")
    idx = np.arange(n)
    left_ids = tuple(int(e) for e in range(n) if (t[e, :] == idx).all())
    has_two_sided = check_property(m, "two-sided-identity").holds
    loop = latin.holds and has_two_sided
    return BolReport(
        associative=assoc,
        right_bol=bol,
        latin_square=latin,
        left_identities=left_ids,
        loop=loop,
        classification=_classification(latin.holds, bol.holds, loop),
    )
