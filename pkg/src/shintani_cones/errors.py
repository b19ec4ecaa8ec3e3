"""Exception hierarchy.

Every error carries a stable dotted ``code`` that the command line layer
copies verbatim into its machine-readable error object.
"""

from __future__ import annotations


class ShintaniError(Exception):
    code = "error"
    exit_code = 1

    def __init__(self, message: str = "", *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(ShintaniError):
    code = "validation"
    exit_code = 2


class NotIrreducible(ValidationError):
    code = "field.min_poly.irreducible"


class WrongSignature(ValidationError):
    code = "field.min_poly.signature"


class NotTotallyPositive(ValidationError):
    code = "element.not_totally_positive"


class InvalidUnit(ValidationError):
    code = "units.invalid"


class InvalidAlpha(ValidationError):
    code = "alphas.invalid"


class ConfigError(ValidationError):
    code = "config"


class PrecisionExhausted(ShintaniError):
    """A sign or ceiling could not be certified below the precision cap."""

    code = "precision.exhausted"
    exit_code = 3


class FieldDivisionByZero(ShintaniError, ZeroDivisionError):
    code = "element.division_by_zero"


class ZeroLastCoordinate(ShintaniError):
    code = "element.zero_last_coordinate"


class SingularBasis(ShintaniError):
    code = "linalg.singular_basis"


class InconsistentSystem(ShintaniError):
    code = "linalg.inconsistent"


class OrderViolation(ShintaniError):
    """The relation built from m-values is not a strict total order."""

    code = "order.violation"


class ZeroCoefficient(ShintaniError):
    code = "cone.zero_coefficient"


class SearchExhausted(ShintaniError):
    code = "alphas.search_exhausted"
    exit_code = 2


class SamplerStarved(ShintaniError):
    code = "verify.sampler_starved"


class ExponentCapExceeded(ShintaniError):
    code = "verify.exponent_cap"


class ShellCapReached(ShintaniError):
    code = "zeta.shell_cap"
    exit_code = 5

    def __init__(self, message: str = "", *, partial_value: float = float("nan"),
                 error_estimate: float = float("inf"), shells: int = 0):
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate
        self.shells = shells
