"""Exception hierarchy for StabCover.

Two roots: bad input (`StabCoverValidationError`, CLI exit 1) and a
falsified property of the arrangement model (`PropertyFalsifiedError`,
CLI exit 2).
"""

from __future__ import annotations

from typing import Any, Dict, List, Sequence, Tuple


class StabCoverValidationError(ValueError):
    """Input rejected before or during computation."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "error_type": type(self).__name__,
            "error_message": str(self),
        }
        if self.field is not None:
            payload["field"] = self.field
        return payload


class UnsupportedRootSystemError(StabCoverValidationError):
    """Root system type/rank outside the supported ADE list or rank ceiling."""


class NonEssentialArrangementError(StabCoverValidationError):
    """Normals do not span the ambient space, or the arrangement is not central."""


class DegenerateFlatError(StabCoverValidationError):
    """Chosen hyperplanes intersect only in the origin."""


class SimplicialityError(StabCoverValidationError):
    """A chamber with more than `rank` extreme rays was reached."""

    def __init__(self, message: str, sign_vector: str) -> None:
        super().__init__(message, field="normals")
        self.sign_vector = sign_vector

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["sign_vector"] = self.sign_vector
        return payload


class EndpointMismatchError(StabCoverValidationError):
    """Paths or words compared with different endpoints, or not composable."""


class OnHyperplaneError(StabCoverValidationError):
    """A complex point lies on a complexified hyperplane."""

    def __init__(self, message: str, hyperplane: int) -> None:
        super().__init__(message, field="point")
        self.hyperplane = hyperplane

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["hyperplane"] = self.hyperplane
        return payload


class RefinementNeededError(StabCoverValidationError):
    """Path lifting could not resolve a segment within the refinement depth."""

    def __init__(self, message: str, segment: Tuple[Any, Any]) -> None:
        super().__init__(message, field="polyline")
        self.segment = segment

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["segment"] = [str(self.segment[0]), str(self.segment[1])]
        return payload


class BudgetExceededError(StabCoverValidationError):
    """A closure search exceeded its state budget."""


class PropertyFalsifiedError(RuntimeError):
    """A property the arrangement model must satisfy was observed to fail."""

    def __init__(self, message: str, counterexample: Dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.counterexample = counterexample or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error_type": type(self).__name__,
            "error_message": str(self),
            "counterexample": self.counterexample,
        }


class LabelConsistencyError(PropertyFalsifiedError):
    """Two propagation routes assign different frames to one chamber."""

    def __init__(
        self,
        message: str,
        routes: Sequence[List[int]],
        sign_vector: str,
    ) -> None:
        super().__init__(
            message,
            {"sign_vector": sign_vector, "routes": [list(route) for route in routes]},
        )
        self.routes = [list(route) for route in routes]


class StructureError(PropertyFalsifiedError):
    """Exchange data or a frame does not have the expected wall-crossing form."""


class CoverageError(PropertyFalsifiedError):
    """A point off every complexified hyperplane lies in no piece."""


class DisjointnessError(PropertyFalsifiedError):
    """A point lies in more than one piece."""
