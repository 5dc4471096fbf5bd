"""
Point models and fat point schemes.

The model decides which cohomology rules apply to a class on the blow-up:
general points (r <= 8), nine points on a smooth cubic with the order l of
-K restricted to it (r = 9), or the conjectural rules for r >= 10.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

from src.lattice.core import DivisorClass
from src.utils.validation import DomainError, validate_multiplicities, validate_point_count


class PointKind(str, Enum):
    GENERAL = "general_r_le_8"
    CUBIC = "cubic_r9"
    CONJECTURAL = "conjectural_r_ge_10"


@dataclass(frozen=True)
class PointModel:
    """Which points are blown up; order is the r = 9 parameter l (None: infinite)."""

    kind: PointKind
    order: Optional[int] = None

    def __post_init__(self) -> None:
        if self.order is not None:
            if self.kind is not PointKind.CUBIC:
                raise DomainError("An order l only makes sense for nine points on a cubic")
            if self.order < 1:
                raise DomainError(f"Order l must be positive, got {self.order}")

    @classmethod
    def for_points(cls, r: int, order: Optional[int] = None) -> 'PointModel':
        validate_point_count(r)
        if r <= 8:
            return cls(PointKind.GENERAL)
        if r == 9:
            return cls(PointKind.CUBIC, order)
        return cls(PointKind.CONJECTURAL)

    @property
    def conjectural(self) -> bool:
        return self.kind is PointKind.CONJECTURAL

    def check(self, r: int) -> None:
        """Raise unless the model is consistent with r points."""
        expected = PointKind.GENERAL if r <= 8 else PointKind.CUBIC if r == 9 else PointKind.CONJECTURAL
        if self.kind is not expected:
            raise DomainError(f"Point model {self.kind.value} does not fit r={r}")

    def cubic_a(self, s: int) -> int:
        """a = floor(s / l) for the class -sK on the cubic model; 0 for infinite order."""
        if self.order is None or s <= 0:
            return 0
        return s // self.order

    def to_json(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'order': self.order}


@dataclass(frozen=True)
class FatPointScheme:
    """Z = m_1 p_1 + ... + m_r p_r at points of the given model."""

    multiplicities: Tuple[int, ...]
    model: PointModel

    def __post_init__(self) -> None:
        object.__setattr__(self, 'multiplicities', validate_multiplicities(self.multiplicities))
        self.model.check(self.r)

    @classmethod
    def create(cls, multiplicities: Sequence[int], order: Optional[int] = None) -> 'FatPointScheme':
        mults = validate_multiplicities(multiplicities)
        return cls(mults, PointModel.for_points(len(mults), order))

    @classmethod
    def uniform(cls, r: int, m: int, order: Optional[int] = None) -> 'FatPointScheme':
        validate_point_count(r)
        return cls.create((m,) * r, order)

    @property
    def r(self) -> int:
        return len(self.multiplicities)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.multiplicities)) == 1

    @property
    def conjectural(self) -> bool:
        return self.model.conjectural

    def divisor(self, d: int) -> DivisorClass:
        """F_d = d*e0 - sum m_i*e_i."""
        return DivisorClass(d, self.multiplicities)

    def to_json(self) -> Dict[str, Any]:
        return {'r': self.r, 'multiplicities': list(self.multiplicities), **self.model.to_json()}
