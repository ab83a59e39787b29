"""Exception types shared across the workbench.

Errors that carry a witness keep it in a ``witness`` attribute so callers
(the CLI, the verification ledger) can surface it without string parsing.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every structured error raised by this package."""


class MalformedDocument(WorkbenchError):
    """Input text is not a valid structure document (syntax or schema)."""


class IndexOutOfRange(WorkbenchError):
    """A table entry or element index falls outside [0, n)."""


class DuplicateLabel(WorkbenchError):
    """Element labels are not pairwise distinct."""


class UnknownProperty(WorkbenchError):
    """Property or criterion identifier is not recognised."""


class NoIdentity(WorkbenchError):
    """No element acts as a two-sided local identity for the given element."""

    def __init__(self, element: int):
        super().__init__(f"element {element} has no local identity")
        self.element = element


class NonUniqueIdentity(WorkbenchError):
    """Two distinct elements act as local identities for the same element."""

    def __init__(self, element: int, first: int, second: int):
        super().__init__(
            f"element {element} has two local identities: {first} and {second}"
        )
        self.element = element
        self.candidates = (first, second)


class EmptySubset(WorkbenchError):
    """Subsets must be nonempty."""


class ForeignIndices(WorkbenchError):
    """Subset or map refers to indices outside its parent structure."""


class TooLarge(WorkbenchError):
    """Input exceeds the documented exhaustive-search bound."""


class NotHomomorphism(WorkbenchError):
    """Operation requires a verified homomorphism."""

    def __init__(self, witness=None):
        super().__init__("map is not a homomorphism")
        self.witness = witness


class NotNormal(WorkbenchError):
    """Operation requires the domain's normality flag."""


class IllDefined(WorkbenchError):
    """Induced product depends on the chosen representatives."""

    def __init__(self, witness=None):
        super().__init__("induced product is not well defined")
        self.witness = witness


class CertificationFailed(WorkbenchError):
    """A construction produced a table that fails certification."""

    def __init__(self, diagnostic=None, message="certification failed"):
        super().__init__(message)
        self.diagnostic = diagnostic


class NotSubgroup(WorkbenchError):
    """Subset fails the generalized-subgroup criterion."""

    def __init__(self, witness=None):
        super().__init__("subset is not a generalized subgroup")
        self.witness = witness


class IllDefinedProduct(WorkbenchError):
    """Coset product depends on the chosen representatives."""

    def __init__(self, witness=None):
        super().__init__("coset product is not well defined")
        self.witness = witness


class HypothesisFailed(WorkbenchError):
    """A construction's hypothesis fails; carries which one and a witness."""

    def __init__(self, which: str, witness=None):
        super().__init__(f"hypothesis failed: {which}")
        self.which = which
        self.witness = witness


class ConclusionFailed(WorkbenchError):
    """Hypotheses hold but the claimed conclusion fails (a recorded finding)."""

    def __init__(self, witness=None, message="conclusion failed"):
        super().__init__(message)
        self.witness = witness


class NotGroupSubset(WorkbenchError):
    """Subset does not form a group under the restricted operation."""

    def __init__(self, witness=None, reason=""):
        super().__init__(f"subset is not a group under restriction: {reason}")
        self.witness = witness
        self.reason = reason


class UnsupportedParameter(WorkbenchError):
    """Generator parameter outside the supported family range."""


class SignatureMismatch(WorkbenchError):
    """Inputs do not match the claim's expected signature."""


class TimeLimitExceeded(WorkbenchError):
    """Soft time budget was exhausted before the run completed."""
