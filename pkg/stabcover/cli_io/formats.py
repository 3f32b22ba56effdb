"""Pydantic models for every JSON artifact read or written by StabCover."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, field_validator

from stabcover.arrangement_core import (
    Arrangement,
    Chamber,
    Hyperplane,
    custom_arrangement,
    named_arrangement,
)
from stabcover.chamber_graph import Arrow, PositivePath
from stabcover.cover_geometry import ComplexPoint, GaussianRational, StabilityPoint
from stabcover.deligne_groupoid import Abelianization, GroupoidWord, Presentation
from stabcover.errors import StabCoverValidationError
from stabcover.ktheory_tracking import KMatrix, PhiMatrix

SCHEMA_VERSION = 1

GaussianJSON = Tuple[int, int, int, int]


class ArrangementModel(BaseModel):
    """Arrangement payload."""

    rank: int = Field(..., gt=0)
    normals: List[List[int]]
    kind: str = "custom"
    name: str = ""
    basis: Optional[List[List[int]]] = None

    @classmethod
    def from_arrangement(cls, arrangement: Arrangement) -> "ArrangementModel":
        return cls(
            rank=arrangement.rank,
            normals=[list(normal) for normal in arrangement.normals],
            kind=arrangement.kind,
            name=arrangement.name,
            basis=[list(ray) for ray in arrangement.basis] if arrangement.basis else None,
        )

    def to_arrangement(self, max_rank: int = 8) -> Arrangement:
        if self.kind == "coxeter-ADE":
            arrangement = named_arrangement(self.name, max_rank=max(max_rank, self.rank))
            if arrangement.normals != [tuple(normal) for normal in self.normals]:
                raise StabCoverValidationError(
                    f"Normals do not match root system {self.name}", field="normals"
                )
            return arrangement
        try:
            return Arrangement(
                rank=self.rank,
                hyperplanes=tuple(Hyperplane(tuple(normal)) for normal in self.normals),
                kind=self.kind,
                name=self.name,
                basis=tuple(tuple(ray) for ray in self.basis) if self.basis else None,
            )
        except StabCoverValidationError:
            return custom_arrangement(self.normals, kind=self.kind, name=self.name)


class ChamberModel(BaseModel):
    id: int
    signs: str
    rays: List[List[int]]

    @classmethod
    def from_chamber(cls, chamber: Chamber) -> "ChamberModel":
        return cls(id=chamber.id, signs=chamber.signs, rays=[list(ray) for ray in chamber.rays])


class ArrowModel(BaseModel):
    id: int
    source: int
    target: int
    label: int
    hyperplane: int

    @classmethod
    def from_arrow(cls, arrow: Arrow) -> "ArrowModel":
        return cls(
            id=arrow.id,
            source=arrow.source,
            target=arrow.target,
            label=arrow.label,
            hyperplane=arrow.hyperplane,
        )


class PathModel(BaseModel):
    arrows: List[int]
    source: int
    target: int

    @classmethod
    def from_path(cls, path: PositivePath) -> "PathModel":
        return cls(arrows=list(path.arrows), source=path.source, target=path.target)


class WordModel(BaseModel):
    """Groupoid word: letters are [arrow id, +1 | -1]."""

    letters: List[Tuple[int, int]] = Field(default_factory=list)
    source: Optional[int] = None
    target: Optional[int] = None

    @field_validator("letters")
    @classmethod
    def _exponents(cls, letters: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        for arrow, exponent in letters:
            if exponent not in (1, -1):
                raise ValueError(f"exponent of arrow {arrow} must be +1 or -1")
        return letters

    @classmethod
    def from_word(cls, word: GroupoidWord) -> "WordModel":
        return cls(letters=[tuple(letter) for letter in word.letters], source=word.source, target=word.target)


class MatrixModel(BaseModel):
    """Row-major integer matrix with the chambers it maps between."""

    rows: List[List[int]]
    source: Optional[int] = None
    target: Optional[int] = None

    @classmethod
    def from_kmatrix(cls, matrix: KMatrix) -> "MatrixModel":
        return cls(rows=matrix.rows(), source=matrix.source, target=matrix.target)

    @classmethod
    def from_phi(cls, matrix: PhiMatrix) -> "MatrixModel":
        return cls(rows=matrix.rows(), source=matrix.chamber, target=matrix.chamber)


class StabilityPointModel(BaseModel):
    base: WordModel
    charge: List[GaussianJSON]


class PresentationModel(BaseModel):
    generators: List[str]
    relations: List[List[int]]
    abelianization: Optional[Dict[str, Any]] = None

    @classmethod
    def from_presentation(
        cls, presentation: Presentation, abelian: Abelianization | None = None
    ) -> "PresentationModel":
        return cls(
            generators=list(presentation.generators),
            relations=[list(relation) for relation in presentation.relations],
            abelianization=(
                {"free_rank": abelian.free_rank, "torsion": list(abelian.torsion)}
                if abelian is not None
                else None
            ),
        )


class CheckModel(BaseModel):
    property: str
    status: Literal["passed", "failed"]
    detail: Optional[str] = None
    counterexample: Optional[Dict[str, Any]] = None


class VerifyReportModel(BaseModel):
    """Report emitted by every verification suite."""

    schema_version: Literal[1] = SCHEMA_VERSION
    suite: str
    arrangement: Dict[str, Any]
    seed: int
    status: Literal["passed", "failed"]
    checks: List[CheckModel]
    timing: Optional[Dict[str, float]] = None


# ---------------------------------------------------------------------------
# Complex numbers
# ---------------------------------------------------------------------------


def gaussian_to_json(value: GaussianRational) -> GaussianJSON:
    return (
        value.re.numerator,
        value.re.denominator,
        value.im.numerator,
        value.im.denominator,
    )


def gaussian_from_json(entry: Sequence[int]) -> GaussianRational:
    if len(entry) != 4:
        raise StabCoverValidationError(
            "Complex coordinates are [re_num, re_den, im_num, im_den]", field="point"
        )
    re_num, re_den, im_num, im_den = (int(value) for value in entry)
    if re_den <= 0 or im_den <= 0:
        raise StabCoverValidationError("Denominators must be positive", field="point")
    return GaussianRational(Fraction(re_num, re_den), Fraction(im_num, im_den))


def point_to_json(z: ComplexPoint) -> List[GaussianJSON]:
    return [gaussian_to_json(value) for value in z]


def point_from_json(entries: Sequence[Sequence[int]]) -> ComplexPoint:
    return tuple(gaussian_from_json(entry) for entry in entries)


def stability_point_to_model(sigma: StabilityPoint) -> StabilityPointModel:
    return StabilityPointModel(base=WordModel.from_word(sigma.base), charge=point_to_json(sigma.charge))


def dumps(payload: BaseModel | Dict[str, Any] | List[Any]) -> str:
    """Canonical JSON text: sorted keys, no None fields."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True)
