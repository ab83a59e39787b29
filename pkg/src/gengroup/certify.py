"""Generalized-group certification.

A certificate records, for an associative table, the per-element local
identity map e and inverse map, after exhaustively verifying:

* associativity,
* existence and uniqueness of e(x) with x*e(x) = e(x)*x = x,
* existence of x' with x*x' = x'*x = e(x), plus empirical uniqueness,
* the derived laws e(e(x)) = e(x), e(x') = e(x), (x')' = x,

and four classification flags (normal, idempotent, abelian, cancellative).
Axiom failures come back as a Diagnostic naming the first failed axiom in
the fixed order: associativity, identity-existence, identity-uniqueness,
inverse-existence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CertificationFailed, IndexOutOfRange, NoIdentity, NonUniqueIdentity
from .tables import FiniteMagma, Witness

AXIOM_ORDER = (
    "associativity",
    "identity-existence",
    "identity-uniqueness",
    "inverse-existence",
)


@dataclass(frozen=True)
class Flags:
    normal: bool
    idempotent: bool
    abelian: bool
    cancellative: bool

    def to_doc(self) -> dict:
        return {
            "normal": self.normal,
            "idempotent": self.idempotent,
            "abelian": self.abelian,
            "cancellative": self.cancellative,
        }


@dataclass(frozen=True)
class Diagnostic:
    """First failed axiom plus a confirming witness."""

    failed_axiom: str
    witness: Witness

    def to_doc(self) -> dict:
        return {"failed_axiom": self.failed_axiom, "witness": self.witness.to_doc()}


@dataclass(frozen=True, eq=False)
class GGCertificate:
    base: FiniteMagma
    e_map: tuple[int, ...]
    inv_map: tuple[int, ...]
    flags: Flags

    @property
    def order(self) -> int:
        return self.base.order

    @property
    def name(self) -> str:
        return self.base.name

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GGCertificate)
            and self.base == other.base
            and self.e_map == other.e_map
            and self.inv_map == other.inv_map
            and self.flags == other.flags
        )

    def __repr__(self) -> str:
        return f"GGCertificate({self.base.name!r}, order={self.base.order})"


def _identity_candidates(t: np.ndarray) -> np.ndarray:
    """cand[x, e] iff x*e == e*x == x."""
    n = t.shape[0]
    idx = np.arange(n)
    right = t == idx[:, None]       # right[x, e]: x*e == x
    left = t.T == idx[:, None]      # left[x, e]:  e*x == x
    return right & left


def local_identity(m: FiniteMagma, x: int) -> int:
    """The unique e with x*e == e*x == x."""
    n = m.order
    if not 0 <= x < n:
        raise IndexOutOfRange(f"element {x} out of range for order {n}")
    cand = _identity_candidates(m.table)[x]
    hits = np.flatnonzero(cand)
    if hits.size == 0:
        raise NoIdentity(x)
    if hits.size > 1:
        raise NonUniqueIdentity(x, int(hits[0]), int(hits[1]))
    return int(hits[0])


def _compute_flags(t: np.ndarray, e_arr: np.ndarray) -> Flags:
    abelian = kernels.first_comm_violation(t) is None
    idempotent = kernels.first_idem_violation(t) is None
    cancellative = (
        kernels.first_left_cancel_violation(t) is None
        and kernels.first_right_cancel_violation(t) is None
    )
    normal = bool(np.array_equal(e_arr[t], t[e_arr[:, None], e_arr[None, :]]))
    return Flags(normal=normal, idempotent=idempotent, abelian=abelian, cancellative=cancellative)


def certify(m: FiniteMagma) -> GGCertificate | Diagnostic:
    """Certify the axioms on a table, or report the first failure."""
    t = m.table
    n = m.order

    hit = kernels.first_assoc_violation(t)
    if hit is not None:
        i, j, k = hit
        w = Witness("associative", hit, (int(t[t[i, j], k]), int(t[i, t[j, k]])))
        return Diagnostic("associativity", w)

    cand = _identity_candidates(t)
    counts = cand.sum(axis=1)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        x = int(missing[0])
        return Diagnostic("identity-existence", Witness("identity-existence", (x,)))
    multi = np.flatnonzero(counts > 1)
    if multi.size:
        x = int(multi[0])
        es = np.flatnonzero(cand[x])
        return Diagnostic(
            "identity-uniqueness",
            Witness("identity-uniqueness", (x, int(es[0]), int(es[1]))),
        )
    e_arr = np.argmax(cand, axis=1).astype(np.int64)

    # inverse candidates: x*y == y*x == e(x)
    icand = (t == e_arr[:, None]) & (t.T == e_arr[:, None])
    icounts = icand.sum(axis=1)
    missing = np.flatnonzero(icounts == 0)
    if missing.size:
        x = int(missing[0])
        return Diagnostic("inverse-existence", Witness("inverse-existence", (x,)))
    multi = np.flatnonzero(icounts > 1)
    if multi.size:
        # impossible once local identities are unique; asserted, not assumed
        x = int(multi[0])
        ys = np.flatnonzero(icand[x])
        raise CertificationFailed(
            message=f"element {x} has two inverses {int(ys[0])}, {int(ys[1])} "
            "despite unique local identities"
        )
    inv_arr = np.argmax(icand, axis=1).astype(np.int64)

    # derived laws; failures here would contradict the axioms just verified
    if not np.array_equal(e_arr[e_arr], e_arr):
        raise CertificationFailed(message="e(e(x)) != e(x) after axioms verified")
    if not np.array_equal(e_arr[inv_arr], e_arr):
        raise CertificationFailed(message="e(inverse(x)) != e(x) after axioms verified")
    if not np.array_equal(inv_arr[inv_arr], np.arange(n)):
        raise CertificationFailed(message="double inverse is not the identity map")

    return GGCertificate(
        base=m,
        e_map=tuple(int(v) for v in e_arr),
        inv_map=tuple(int(v) for v in inv_arr),
        flags=_compute_flags(t, e_arr),
    )


def gg_flags(cert: GGCertificate) -> Flags:
    """Recompute the classification flags from scratch (audit path)."""
    return _compute_flags(cert.base.table, np.asarray(cert.e_map, dtype=np.int64))


def serialize_certificate(cert: GGCertificate) -> str:
    """Certified document: base members plus maps and flags."""
    doc = {
        "name": cert.base.name,
        "elements": list(cert.base.elements),
        "table": [[int(v) for v in row] for row in cert.base.table],
        "maps": {"e": list(cert.e_map), "inv": list(cert.inv_map)},
        "flags": cert.flags.to_doc(),
    }
    return json.dumps(doc, indent=2) + "\n"


def certificate_invariant_violations(cert: GGCertificate) -> list[str]:
    """Audit every certificate invariant exhaustively; empty means clean.

    Used by the acceptance suite; kept separate from certify so the audit
    is a fresh evaluation, not a replay of certification state.
    """
    t = cert.base.table
    n = cert.base.order
    e = np.asarray(cert.e_map, dtype=np.int64)
    inv = np.asarray(cert.inv_map, dtype=np.int64)
    bad: list[str] = []
    if kernels.first_assoc_violation(t) is not None:
        bad.append("base not associative")
    cand = _identity_candidates(t)
    if not np.array_equal(cand.sum(axis=1), np.ones(n, dtype=np.int64)):
        bad.append("local identities not unique")
    if not np.array_equal(np.argmax(cand, axis=1), e):
        bad.append("e_map mismatch")
    icand = (t == e[:, None]) & (t.T == e[:, None])
    if not np.array_equal(icand.sum(axis=1), np.ones(n, dtype=np.int64)):
        bad.append("inverses not unique")
    if not np.array_equal(np.argmax(icand, axis=1), inv):
        bad.append("inv_map mismatch")
    if not np.array_equal(e[e], e):
        bad.append("e(e(x)) != e(x)")
    if not np.array_equal(e[inv], e):
        bad.append("e(inv(x)) != e(x)")
    if not np.array_equal(inv[inv], np.arange(n)):
        bad.append("inv(inv(x)) != x")
    if gg_flags(cert) != cert.flags:
        bad.append("flags disagree with recomputation")
    return bad
