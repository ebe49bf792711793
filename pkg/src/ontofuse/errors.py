"""Exception types shared across the library."""
from __future__ import annotations


class OntofuseError(Exception):
    """Base class for all library errors."""


class DomainMismatch(OntofuseError):
    """A map is not total on its stated domain (or leaves its codomain)."""


class RespectViolation(OntofuseError):
    """A quotient invariant fails the respect condition.

    Carries a witnessing (instance, type, related type) triple.
    """

    def __init__(self, instance, type_a, type_b):
        super().__init__(f"invariant not respected: {instance!r} distinguishes {type_a!r} and {type_b!r}")
        self.witness = (instance, type_a, type_b)


class IncompatibleQuotient(OntofuseError):
    """A type endorelation relates arity- or reference-incompatible types."""

    def __init__(self, a, b, reason):
        super().__init__(f"cannot identify {a!r} with {b!r}: {reason}")
        self.witness = (a, b)


class NameSetMismatch(OntofuseError):
    """Hypergraph product requires equal name sets."""


class LaxViolation(OntofuseError):
    """An expression's free variables exceed the assignment's arity."""


class CaptureError(OntofuseError):
    """Translation would identify a bound variable with a free one."""


class BudgetExceeded(OntofuseError):
    """A combinatorial enumeration exceeded its configured candidate cap."""


class SoundnessViolation(OntofuseError):
    """An operation that requires a sound logic received or produced an unsound one."""


class EdgeInvalid(OntofuseError):
    """A named edge of an alignment diagram failed its validity check."""

    def __init__(self, edge, witness):
        super().__init__(f"edge {edge} is not a valid morphism: {witness!r}")
        self.edge = edge
        self.witness = witness


class AgreementFailure(OntofuseError):
    """The two fiber logics of a practical integration differ.

    Carries the first differing item.
    """

    def __init__(self, detail):
        super().__init__(f"community interpretations disagree: {detail}")
        self.detail = detail
