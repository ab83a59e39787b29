"""Finite magmas as dense Cayley tables, their document format, and the
primitive property checks.

Elements are identified by index everywhere; labels are presentation only.
A structure document is a JSON object with members ``name``, ``elements``
and ``table`` in that order, two-space indented, newline terminated.
Certified documents may additionally carry ``maps`` and ``flags`` members,
which are ignored on input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DuplicateLabel,
    IndexOutOfRange,
    MalformedDocument,
    UnknownProperty,
)

PROPERTY_NAMES = (
    "associative",
    "commutative",
    "left-cancellative",
    "right-cancellative",
    "cancellative",
    "latin-square",
    "two-sided-identity",
    "left-identity",
    "idempotent-table",
)

# Properties asserting existence of an element; their witness names one and
# is present exactly when the property holds.
EXISTENCE_PROPERTIES = ("two-sided-identity", "left-identity")


@dataclass(frozen=True)
class Witness:
    """A concrete tuple demonstrating a property outcome.

    ``indices`` holds one to four element indices whose meaning depends on
    ``kind``; ``detail`` carries the relevant products (e.g. the two unequal
    sides of a failed identity) so the witness can be re-evaluated.
    """

    kind: str
    indices: tuple[int, ...]
    detail: tuple[int, ...] | None = None

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "detail": None if self.detail is None else list(self.detail),
        }


@dataclass(frozen=True)
class PropertyResult:
    holds: bool
    witness: Witness | None = None

    def to_doc(self) -> dict:
        return {
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_doc(),
        }


class FiniteMagma:
    """A named finite set with a total binary operation as an n x n table."""

    __slots__ = ("name", "elements", "table")

    def __init__(self, name: str, elements, table):
        elements = tuple(str(e) for e in elements)
        n = len(elements)
        if n < 1:
            raise MalformedDocument("a structure needs at least one element")
        if len(set(elements)) != n:
            raise DuplicateLabel(f"element labels are not distinct: {elements}")
        arr = np.ascontiguousarray(table, dtype=np.int64)
        if arr.shape != (n, n):
            raise MalformedDocument(
                f"table shape {arr.shape} does not match {n} elements"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise IndexOutOfRange(
                f"table entries must lie in [0, {n}); found {int(arr.min())}..{int(arr.max())}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "table", arr)

    def __setattr__(self, *_):
        raise AttributeError("FiniteMagma is immutable")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteMagma)
            and self.name == other.name
            and self.elements == other.elements
            and np.array_equal(self.table, other.table)
        )

    def __repr__(self) -> str:
        return f"FiniteMagma({self.name!r}, order={self.order})"


def product(m: FiniteMagma, i: int, j: int) -> int:
    """Table lookup m.elements[i] * m.elements[j], as an index."""
    n = m.order
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRange(f"indices ({i}, {j}) out of range for order {n}")
    return int(m.table[i, j])


def parse_magma(text: str) -> FiniteMagma:
    """Parse a structure document; see the module docstring for the format."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedDocument("document must be a JSON object")
    required = {"name", "elements", "table"}
    allowed = required | {"maps", "flags"}
    keys = set(obj)
    if not required <= keys:
        raise MalformedDocument(f"missing members: {sorted(required - keys)}")
    if not keys <= allowed:
        raise MalformedDocument(f"unexpected members: {sorted(keys - allowed)}")
    name = obj["name"]
    if not isinstance(name, str):
        raise MalformedDocument("name must be a string")
    elements = obj["elements"]
    if (
        not isinstance(elements, list)
        or not elements
        or not all(isinstance(e, str) for e in elements)
    ):
        raise MalformedDocument("elements must be a non-empty list of strings")
    n = len(elements)
    table = obj["table"]
    if not isinstance(table, list) or len(table) != n:
        raise MalformedDocument(f"table must be a list of {n} rows")
    for row in table:
        if not isinstance(row, list) or len(row) != n:
            raise MalformedDocument(f"every table row must have {n} entries")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                raise MalformedDocument(f"table entry {v!r} is not an integer")
    # range errors and duplicate labels surface from the constructor
    return FiniteMagma(name, elements, table)


def serialize_magma(m: FiniteMagma) -> str:
    """Canonical document text; parse_magma(serialize_magma(m)) == m."""
    doc = {
        "name": m.name,
        "elements": list(m.elements),
        "table": [[int(v) for v in row] for row in m.table],
    }
    return json.dumps(doc, indent=2) + "\n"


def _violation(kind: str, idx, detail) -> PropertyResult:
    return PropertyResult(False, Witness(kind, tuple(idx), tuple(detail)))


def _check_associative(m):
    hit = kernels.first_assoc_violation(m.table)
    if hit is None:
        return PropertyResult(True)
    i, j, k = hit
    t = m.table
    return _violation("associative", hit, (int(t[t[i, j], k]), int(t[i, t[j, k]])))


def _check_commutative(m):
    hit = kernels.first_comm_violation(m.table)
    if hit is None:
        return PropertyResult(True)
    i, j = hit
    return _violation("commutative", hit, (int(m.table[i, j]), int(m.table[j, i])))


def _check_left_cancellative(m):
    hit = kernels.first_left_cancel_violation(m.table)
    if hit is None:
        return PropertyResult(True)
    a, x, y = hit
    return _violation(
        "left-cancellative", hit, (int(m.table[a, x]), int(m.table[a, y]))
    )


def _check_right_cancellative(m):
    hit = kernels.first_right_cancel_violation(m.table)
    if hit is None:
        return PropertyResult(True)
    a, x, y = hit
    return _violation(
        "right-cancellative", hit, (int(m.table[x, a]), int(m.table[y, a]))
    )


def _check_cancellative(m):
    left = _check_left_cancellative(m)
    if not left.holds:
        return left
    return _check_right_cancellative(m)


def _check_latin(m):
    # independent of the cancellation scans: rows/columns tested as permutations
    hit = kernels.first_latin_row_violation(m.table)
    if hit is not None:
        a, x, y = hit
        return _violation("latin-square", hit, (int(m.table[a, x]), 0))
    hit = kernels.first_latin_col_violation(m.table)
    if hit is not None:
        a, x, y = hit
        return _violation("latin-square", hit, (int(m.table[x, a]), 1))
    return PropertyResult(True)


def _check_two_sided_identity(m):
    t = m.table
    idx = np.arange(m.order)
    for e in range(m.order):
        if (t[:, e] == idx).all() and (t[e, :] == idx).all():
            return PropertyResult(True, Witness("two-sided-identity", (e,)))
    return PropertyResult(False)


def _check_left_identity(m):
    t = m.table
    idx = np.arange(m.order)
    for e in range(m.order):
        if (t[e, :] == idx).all():
            return PropertyResult(True, Witness("left-identity", (e,)))
    return PropertyResult(False)


def _check_idempotent(m):
    hit = kernels.first_idem_violation(m.table)
    if hit is None:
        return PropertyResult(True)
    return _violation("idempotent-table", (hit,), (int(m.table[hit, hit]), hit))


_CHECKS = {
    "associative": _check_associative,
    "commutative": _check_commutative,
    "left-cancellative": _check_left_cancellative,
    "right-cancellative": _check_right_cancellative,
    "cancellative": _check_cancellative,
    "latin-square": _check_latin,
    "two-sided-identity": _check_two_sided_identity,
    "left-identity": _check_left_identity,
    "idempotent-table": _check_idempotent,
}


def check_property(m: FiniteMagma, prop: str) -> PropertyResult:
    """Evaluate one of PROPERTY_NAMES over the whole table.

    Universal properties return the lexicographically smallest violating
    tuple as witness; existence properties name the smallest witness element
    exactly when they hold.
    """
    try:
        fn = _CHECKS[prop]
    except KeyError:
        raise UnknownProperty(f"unknown property {prop!r}") from None
    return fn(m)


def reevaluate_witness(m: FiniteMagma, w: Witness) -> bool:
    """Check a witness against the table: does it demonstrate what it claims?

    Violation witnesses (associative, commutative, cancellation, latin,
    idempotent, right-bol) must re-produce the violation; existence
    witnesses (two-sided-identity, left-identity) must re-produce the
    element's defining property.
    """
    t = m.table
    k = w.kind
    ix = w.indices
    if k == "associative":
        i, j, kk = ix
        return bool(t[t[i, j], kk] != t[i, t[j, kk]])
    if k == "commutative":
        i, j = ix
        return bool(t[i, j] != t[j, i])
    if k == "left-cancellative":
        a, x, y = ix
        return x != y and bool(t[a, x] == t[a, y])
    if k == "right-cancellative":
        a, x, y = ix
        return x != y and bool(t[x, a] == t[y, a])
    if k == "latin-square":
        a, x, y = ix
        orient = 0 if w.detail is None else w.detail[1]
        if orient == 0:
            return x != y and bool(t[a, x] == t[a, y])
        return x != y and bool(t[x, a] == t[y, a])
    if k == "idempotent-table":
        (x,) = ix
        return bool(t[x, x] != x)
    if k == "two-sided-identity":
        (e,) = ix
        idx = np.arange(m.order)
        return bool((t[e, :] == idx).all() and (t[:, e] == idx).all())
    if k == "left-identity":
        (e,) = ix
        return bool((t[e, :] == np.arange(m.order)).all())
    if k == "right-bol":
        x, y, z = ix
        return bool(t[t[t[x, y], z], y] != t[x, t[t[y, z], y]])
    raise UnknownProperty(f"no re-evaluation rule for witness kind {k!r}")
