"""Exception types shared across the package."""


class MindegError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRule(MindegError):
    """A power or commutator rule violates the shape constraints."""


class InconsistentPresentation(MindegError):
    """Collection from the rules does not define a group of the full order.

    The ``witness`` attribute holds a short human-readable description of
    one failing overlap or axiom instance.
    """

    def __init__(self, witness):
        super().__init__(witness)
        self.witness = witness


class PrimeMismatch(MindegError):
    """Two objects built over different primes were combined."""


class NotNormal(MindegError):
    """A subgroup used where a normal subgroup is required is not normal."""


class NotAbelian(MindegError):
    """An abelian-only computation was requested for a non-abelian group."""


class NotFaithful(MindegError):
    """A permutation representation requested as faithful has a kernel."""


class BoundExceeded(MindegError):
    """The group order exceeds the configured safety bound for a search."""


class UnknownName(MindegError):
    """A catalog lookup used a name that is not registered."""


class BadPrime(MindegError):
    """A catalog entry was requested at a prime it is not defined for."""


class AuditFailed(MindegError):
    """A constructed group fails one of its recorded defining relations."""
