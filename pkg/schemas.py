from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from scalars import parse_scalar


class MinorVariant(str, Enum):
    BELOW = "below-diagonal"
    ABOVE = "above-diagonal"


class BorderedMinorSpec(BaseModel):
    """Which a^{(k)}_{i,j} determinant to build"""
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1, description="Elimination step")
    i: int = Field(..., ge=1, description="Row index of the entry")
    j: int = Field(..., ge=1, description="Column index of the entry")
    variant: MinorVariant

    @model_validator(mode='after')
    def check_shape(self):
        if self.j <= self.k:
            raise ValueError(f'j must exceed k (got j={self.j}, k={self.k})')
        if self.variant is MinorVariant.BELOW and self.i <= self.k:
            raise ValueError(f'below-diagonal minors need i > k (got i={self.i}, k={self.k})')
        if self.variant is MinorVariant.ABOVE and self.i >= self.k:
            raise ValueError(f'above-diagonal minors need i < k (got i={self.i}, k={self.k})')
        return self

    @classmethod
    def below(cls, k: int, i: int, j: int) -> "BorderedMinorSpec":
        return cls(k=k, i=i, j=j, variant=MinorVariant.BELOW)

    @classmethod
    def above(cls, k: int, i: int, j: int) -> "BorderedMinorSpec":
        return cls(k=k, i=i, j=j, variant=MinorVariant.ABOVE)


class MatrixDocument(BaseModel):
    """JSON interchange form: {"rows": [["1", "1/2"], ...]}"""
    rows: List[List[str]] = Field(..., min_length=1)

    @field_validator('rows', mode='before')
    @classmethod
    def stringify_tokens(cls, v):
        # integers are accepted on input and normalized to tokens
        if isinstance(v, list):
            return [[str(t) if isinstance(t, int) and not isinstance(t, bool) else t for t in row]
                    if isinstance(row, list) else row for row in v]
        return v

    @field_validator('rows')
    @classmethod
    def rows_rectangular(cls, v):
        width = len(v[0])
        if width == 0:
            raise ValueError('rows must not be empty')
        for r, row in enumerate(v, start=1):
            if len(row) != width:
                raise ValueError(f'row {r} has {len(row)} tokens, expected {width}')
            for token in row:
                parse_scalar(token)
        return v


class Discrepancy(BaseModel):
    """One failed equality, with the operands that disagreed"""
    kind: str
    k: Optional[int] = None
    i: Optional[int] = None
    j: Optional[int] = None
    operands: Dict[str, str] = Field(default_factory=dict)


class ConstructionReport(BaseModel):
    rows: int
    cols: int
    steps_checked: int = 0
    cells_checked: int = 0
    table_entries_checked: int = 0
    base_identities_checked: int = 0
    non_exact_divisions: int = 0
    zero_pivot_step: Optional[int] = None
    discrepancies: List[Discrepancy] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.zero_pivot_step is None
            and self.non_exact_divisions == 0
            and not self.discrepancies
        )


class PivotingReport(BaseModel):
    rows: int
    cols: int
    first_vanishing_minor: Optional[int] = None
    strict_failure_step: Optional[int] = None
    structurally_singular_step: Optional[int] = None
    permutation: List[int] = Field(default_factory=list)
    discrepancies: List[Discrepancy] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.discrepancies


class BatteryResult(BaseModel):
    name: str
    instances: int = 0
    cells_checked: int = 0
    non_exact_divisions: int = 0
    failures: int = 0
    discrepancies: List[Discrepancy] = Field(default_factory=list)


class SelfcheckReport(BaseModel):
    source: str
    seed: Optional[int] = None
    batteries: List[BatteryResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(b.failures == 0 and b.non_exact_divisions == 0 for b in self.batteries)


class EntryRecord(BaseModel):
    i: int
    j: int
    case: str
    sign: int
    numerator: str
    denominator: str
    value: str
    check: Optional[str] = None


class TraceStepRecord(BaseModel):
    k: int
    rows: List[List[str]]
    entries: List[EntryRecord]


class TraceDocument(BaseModel):
    permutation: List[int]
    steps: List[TraceStepRecord]
