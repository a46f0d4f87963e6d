import typing as t


class TcubatureException(Exception):
    """Base class for all tcubature exceptions."""

    def __init__(self, description, *args, exc_info=None):
        self.description = str(description)
        self.exc_info = exc_info

        super().__init__(description, *args)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}: {self.description}"

    def __str__(self):
        return self.description


class NotPositiveDefinite(TcubatureException):
    """Matrix is not symmetric positive definite."""

    def __init__(self, matrix=None, name: t.Optional[str] = None):
        self.matrix = matrix
        self.name = name

        if name:
            description = f"Matrix '{name}' is not positive definite"
        else:
            description = "Matrix is not positive definite"

        super().__init__(description, name)


class InnovationCovarianceNotPD(NotPositiveDefinite):
    """Innovation scale matrix is not positive definite after jitter."""

    def __init__(self, matrix=None, jitter: float = 0.0):
        self.jitter = jitter

        super().__init__(matrix, name="Pzz")

        self.description = (
            "Innovation scale matrix 'Pzz' is not positive definite "
            f"after adding jitter {jitter:.3g}"
        )


class DomainError(TcubatureException, ValueError):
    """Argument outside the domain of a function."""

    def __init__(self, name: str, value, requirement: str):
        self.name = name
        self.value = value
        self.requirement = requirement

        super().__init__(
            f"Argument '{name}' = {value!r} violates {requirement}",
            name,
            value,
        )


class DofTooSmall(DomainError):
    """Degrees of freedom too small for a finite covariance."""

    def __init__(self, nu, minimum: float = 2.0):
        self.nu = nu
        self.minimum = minimum

        super().__init__("nu", nu, f"nu > {minimum:g}")


class NonFiniteIntegrand(TcubatureException):
    """Integrand returned non-finite values at a cubature point."""

    def __init__(self, rule: t.Optional[str] = None):
        self.rule = rule

        if rule:
            description = f"Integrand is not finite at a '{rule}' point"
        else:
            description = "Integrand is not finite at a cubature point"

        super().__init__(description, rule)


class LengthMismatch(TcubatureException, ValueError):
    """Sequences that must be aligned have different lengths."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual

        super().__init__(
            f"Expected length {expected}, got {actual}", expected, actual
        )


class ConfigError(TcubatureException):
    """Experiment or scenario not configured correctly."""

    def __init__(self, key: str, reason: str = "invalid value"):
        self.key = key
        self.reason = reason

        super().__init__(f"Config key '{key}': {reason}", key, reason)


class RuleNotRegistered(TcubatureException, KeyError):
    """Integration rule not registered on a registry."""

    def __init__(self, name: t.Optional[str] = None):
        self.name = name

        if name:
            description = f"Rule '{name}' not registered on this registry"
        else:
            description = "No rule registered on this registry"

        super().__init__(description, name)


class FilterNotRegistered(TcubatureException, KeyError):
    """Filter not registered on a filter bank."""

    def __init__(self, name: t.Optional[str] = None):
        self.name = name

        if name:
            description = f"Filter '{name}' not registered on this bank"
        else:
            description = "No filter registered on this bank"

        super().__init__(description, name)
