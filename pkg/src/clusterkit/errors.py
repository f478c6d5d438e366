"""Exception hierarchy shared by the whole toolkit.

Every domain failure derives from ClusterError so the CLI/HTTP layer can map
it to a structured error payload with a stable ``code``.
"""

from __future__ import annotations


class ClusterError(Exception):
    """Base class for all domain errors."""

    code = "cluster-error"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


class NotDivisible(ClusterError):
    """Exact Laurent division has a nonzero remainder."""

    code = "not-divisible"


class ParseError(ClusterError):
    code = "parse-error"


class InconsistentLabels(ClusterError):
    code = "inconsistent-labels"


class NotSignSkewSymmetric(ClusterError):
    code = "not-sign-skew-symmetric"


class UnknownDirection(ClusterError):
    code = "unknown-direction"


class NotExchangeable(ClusterError):
    code = "not-exchangeable"


class LaurentViolation(ClusterError):
    """Exchange relation failed to divide; either a bug or a violated
    totality hypothesis on the input matrix."""

    code = "laurent-violation"


class SequenceError(ClusterError):
    """A mutation sequence step is inadmissible; carries the failing index."""

    code = "sequence-error"

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index

    def payload(self) -> dict:
        out = super().payload()
        out["index"] = self.index
        return out


class BadSpec(ClusterError):
    code = "bad-spec"


class NotFrozen(ClusterError):
    code = "not-frozen"


class LengthMismatch(ClusterError):
    code = "length-mismatch"


class NameClash(ClusterError):
    code = "name-clash"


class BadGlueSpec(ClusterError):
    code = "bad-glue-spec"


class NotGlueable(ClusterError):
    """A frozen pair whose column signs split somewhere in the mutation
    class; carries the offending variable and a replayable sequence."""

    code = "not-glueable"

    def __init__(self, message: str, variable: str, seq: list[str]):
        super().__init__(message)
        self.variable = variable
        self.seq = seq

    def payload(self) -> dict:
        out = super().payload()
        out["variable"] = self.variable
        out["seq"] = self.seq
        return out


class SourceTargetMismatch(ClusterError):
    code = "source-target-mismatch"


class NotBiadmissible(ClusterError):
    code = "not-biadmissible"


class NotAHomAfterMutation(ClusterError):
    """Mutating a seed homomorphism produced a map that violates the
    homomorphism conditions; existence of the induced map is open in
    general, so this is a verdict, not a bug."""

    code = "not-a-hom-after-mutation"


class HomVerificationFailed(ClusterError):
    code = "hom-verification-failed"


class NotNoncontractible(ClusterError):
    code = "not-noncontractible"


class NotSurjectiveOnVariables(ClusterError):
    code = "not-surjective-on-variables"


class IsoVerificationFailed(ClusterError):
    code = "iso-verification-failed"


class ContractionUndefined(ClusterError):
    code = "contraction-undefined"


class ZeroImage(ClusterError):
    code = "zero-image"


class NotAcyclic(ClusterError):
    code = "not-acyclic"


class RankTooLarge(ClusterError):
    code = "rank-too-large"
