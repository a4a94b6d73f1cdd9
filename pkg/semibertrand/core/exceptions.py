from typing import Any, Dict, Optional
import logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REJECTED = 2


# Custom Exception Classes
class GeometryError(Exception):
    """Base exception class for all toolkit exceptions."""

    def __init__(
        self,
        message: str = "An error occurred",
        exit_code: int = EXIT_INPUT,
        details: Optional[Dict[str, Any]] = None,
        error_code: Optional[str] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        self.error_code = error_code
        super().__init__(self.message)

    def to_report(self) -> Dict[str, Any]:
        """Flat description used by the CLI error report."""
        report: Dict[str, Any] = {"error_code": self.error_code, "message": self.message}
        for key, value in self.details.items():
            report[f"detail_{key}"] = value
        return report


class InputError(GeometryError):
    """Raised when user-supplied input cannot be used."""

    def __init__(
        self,
        message: str = "Invalid input",
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "INPUT_ERROR",
    ):
        super().__init__(message=message, exit_code=EXIT_INPUT, details=details, error_code=error_code)


class MathematicalRejection(GeometryError):
    """Raised when the input is well formed but the geometry does not qualify."""

    def __init__(
        self,
        message: str = "Mathematical rejection",
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "REJECTED",
    ):
        super().__init__(message=message, exit_code=EXIT_REJECTED, details=details, error_code=error_code)


class DimensionMismatchError(InputError):
    """Raised when vectors or components disagree with the metric dimension."""

    def __init__(self, expected: int, actual: int, what: str = "vector"):
        super().__init__(
            message=f"{what} has length {actual}, expected {expected}",
            details={"expected": expected, "actual": actual},
            error_code="DIMENSION_MISMATCH",
        )


class ExpressionSyntaxError(InputError):
    """Raised when a curve expression does not parse."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        super().__init__(
            message=f"{message} at offset {offset}",
            details={"offset": offset, "text": text},
            error_code="SYNTAX_ERROR",
        )


class UnknownIdentifierError(ExpressionSyntaxError):
    """Raised when an expression names a symbol or function the grammar lacks."""

    def __init__(self, name: str, offset: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown identifier '{name}'", offset, text)
        self.error_code = "UNKNOWN_IDENTIFIER"


class InputFileError(InputError):
    """Raised when a curve or prescription file is malformed."""

    def __init__(self, message: str, path: str, line: Optional[int] = None, column: Optional[int] = None):
        details: Dict[str, Any] = {"path": path}
        if line is not None:
            details["line"] = line
        if column is not None:
            details["column"] = column
        super().__init__(message=message, details=details, error_code="INPUT_FILE_ERROR")


class MissingHintError(InputError):
    """Raised when a constant-curvature family needs a hint to pick a member."""

    def __init__(self, hint: str):
        super().__init__(
            message=f"constants are not unique for this curve; supply {hint}",
            details={"hint": hint},
            error_code="MISSING_HINT",
        )


class StepSizeError(InputError):
    """Raised when frame integration drifts past the allowed invariant error."""

    def __init__(self, drift: float, step: float, s: float):
        super().__init__(
            message=f"frame drift {drift:.3e} at s={s:.6g} exceeds the limit; try a step below {step / 2:.3g}",
            details={"drift": drift, "step": step, "s": s},
            error_code="STEP_SIZE_ERROR",
        )


class ReportWriteError(InputError):
    """Raised when a report cannot be written."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"cannot write report {path}: {reason}",
            details={"path": path},
            error_code="REPORT_WRITE_ERROR",
        )


class EvaluationDomainError(MathematicalRejection):
    """Raised when an expression is evaluated outside its domain."""

    def __init__(self, operation: str, point: Any, message: Optional[str] = None, error_code: str = "DOMAIN_ERROR"):
        self.point = point
        super().__init__(
            message=message or f"{operation} undefined at s={point}",
            details={"operation": operation, "point": _scalar(point)},
            error_code=error_code,
        )


class NonDifferentiableError(EvaluationDomainError):
    """Raised when an expression has a value at a point but no derivatives there."""

    def __init__(self, operation: str, point: Any):
        super().__init__(
            operation,
            point,
            message=f"{operation} is not differentiable at s={point}",
            error_code="NOT_DIFFERENTIABLE",
        )


class NonTimelikeCurveError(MathematicalRejection):
    """Raised when a curve fails to be timelike somewhere on its domain."""

    def __init__(self, parameter: float, character: str):
        self.parameter = parameter
        super().__init__(
            message=f"curve is {character} at parameter {parameter:.10g}",
            details={"parameter": parameter, "character": character},
            error_code="NON_TIMELIKE",
        )


class DegenerateFlagError(MathematicalRejection):
    """Raised when the derivative flag loses rank or turns null."""

    def __init__(self, order: int, message: Optional[str] = None, parameter: Optional[float] = None):
        self.order = order
        details: Dict[str, Any] = {"order": order}
        if parameter is not None:
            details["parameter"] = parameter
        super().__init__(
            message=message or f"derivative flag degenerates at order {order}",
            details=details,
            error_code="DEGENERATE_FLAG",
        )


class RankDeficientError(MathematicalRejection):
    """Raised when orthonormalization receives linearly dependent vectors."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(
            message=f"vector {index} is linearly dependent on its predecessors",
            details={"index": index},
            error_code="RANK_DEFICIENT",
        )


class ConventionViolationError(MathematicalRejection):
    """Raised when a frame vector has the wrong causal character."""

    def __init__(self, vector: str, expected: str, parameter: Optional[float] = None):
        details: Dict[str, Any] = {"vector": vector, "expected": expected}
        if parameter is not None:
            details["parameter"] = parameter
        super().__init__(
            message=f"{vector} must be {expected}",
            details=details,
            error_code="CONVENTION_VIOLATION",
        )


class CurvatureSignChangeError(DegenerateFlagError):
    """Raised when a curvature changes sign between adjacent samples."""

    def __init__(self, name: str, parameter: float):
        super().__init__(
            order=int(name[-1]) + 1,
            message=f"{name} changes sign near s={parameter:.6g}",
            parameter=parameter,
        )
        self.error_code = "CURVATURE_SIGN_CHANGE"


class SingularOffsetError(MathematicalRejection):
    """Raised when an offset mate loses regularity."""

    def __init__(self, alpha: float, min_speed: float):
        super().__init__(
            message=f"offset {alpha:.10g} makes the mate singular (min speed {min_speed:.3e})",
            details={"alpha": alpha, "min_speed": min_speed},
            error_code="SINGULAR_OFFSET",
        )


class CertificateInconsistencyError(MathematicalRejection):
    """Raised when an accepted certificate contradicts the curve it certifies."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message=message, details=details, error_code="CERTIFICATE_INCONSISTENT")


def _scalar(point: Any) -> Any:
    try:
        return float(point)
    except (TypeError, ValueError):
        return str(point)


# Utility functions for raising common exceptions
def raise_dimension_mismatch(expected: int, actual: int, what: str = "vector") -> None:
    """Convenience function to raise DimensionMismatchError."""
    raise DimensionMismatchError(expected=expected, actual=actual, what=what)


def raise_domain_error(operation: str, point: Any) -> None:
    """Convenience function to raise EvaluationDomainError."""
    raise EvaluationDomainError(operation=operation, point=point)


def log_exception(exc: GeometryError) -> None:
    """Log a toolkit exception with its structured details."""
    logger.error(
        f"{exc.error_code} - {exc.message}",
        extra={"error_code": exc.error_code, "exit_code": exc.exit_code, "details": exc.details},
    )
