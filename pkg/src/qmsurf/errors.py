"""Exception types shared across the package.

Two families matter for CLI exit codes: ``InputError`` maps to exit code 2
(bad files, unknown labels, invalid configuration), ``VerificationError``
maps to exit code 1 (a mathematical check that ran and came out false).
Anything else is an ordinary bug and propagates.
"""


class QmsurfError(Exception):
    pass


class InputError(QmsurfError):
    pass


class VerificationError(QmsurfError):
    pass


# -- field / residue arithmetic ------------------------------------------

class DenominatorNotInvertible(QmsurfError):
    """Fraction reduced at a prime dividing its denominator."""


# -- conics and the genus-2 family ----------------------------------------

class BasePointInvalid(InputError):
    """Base point handed to the conic sweep is not on the conic."""


class DegeneratePoint(QmsurfError):
    """Conic point with X = 0 has no associated j."""


class DegenerateJ(QmsurfError):
    """j in {0, -16/27} collapses the family sextic."""


class SingularCurve(QmsurfError):
    """Vanishing sextic discriminant."""


class NotInFamily(QmsurfError):
    """No j-value matches the curve's invariants."""


class FieldDoesNotSplit(InputError):
    """The quaternion algebra is not split by the field, so the conic is pointless."""


# -- counting --------------------------------------------------------------

class BadReduction(QmsurfError):
    """Reduction of the model at this prime is unusable for counting."""


class NotQMShape(QmsurfError):
    """Point counts incompatible with a square degree-4 Euler factor."""


class NoSplitPrimes(QmsurfError):
    """Genuineness test needs at least one good conjugate pair."""


# -- galois diagnostics -----------------------------------------------------

class MissingPrime(InputError):
    """Probe prime absent from the trace table."""


# -- ray class / trace comparison -------------------------------------------

class BudgetExceeded(InputError):
    """Modulus norm or search budget above the configured cap."""


class PrimeDividesModulus(InputError):
    """Character evaluation requested at a prime dividing the modulus."""


class Inconsistent(QmsurfError):
    """No order-3 character matches the supplied splitting oracle."""


class ProbeFailure(VerificationError):
    """A residual-isomorphism probe condition failed; carries the stage name."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        super().__init__(f"{condition}: {detail}" if detail else condition)


class TraceMismatch(VerificationError):
    """Trace disagreement between curve and newform at a specific prime."""

    def __init__(self, gen, curve_value, form_value):
        self.gen = gen
        self.curve_value = curve_value
        self.form_value = form_value
        super().__init__(
            f"trace mismatch at ({gen}): curve {curve_value} != form {form_value}")


class MissingEigenvalue(InputError):
    """Newform table lacks a prime required by the comparison."""


# -- newform ingestion --------------------------------------------------------

class SchemaError(InputError):
    pass


class UnknownField(InputError):
    pass


class DuplicatePrime(InputError):
    pass


class HeckeBoundViolation(InputError):
    pass


class FieldMismatch(InputError):
    pass


class NetworkError(InputError):
    pass


class NotFound(InputError):
    pass


class ConversionError(InputError):
    pass


class FixtureMissing(InputError):
    pass
