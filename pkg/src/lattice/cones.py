"""
Exceptional curves, nef and effective tests, uniform thresholds and fixed parts.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Dict, Optional, Tuple

from sympy.utilities.iterables import multiset_permutations

from src.lattice.core import (
    CLAMP,
    DivisorClass,
    canonical_class,
    chamber_reduce,
    chi,
    intersect,
    is_chamber,
    pull_back,
    weyl_normal_form,
)
from src.lattice.models import PointKind, PointModel
from src.utils.logging_config import get_logger
from src.utils.validation import DomainError, UnsupportedError

logger = get_logger(__name__)

# (d; multiplicities) of the (-1)-classes up to permutation, for r <= 8
EXCEPTIONAL_TYPES: Tuple[Tuple[int, Tuple[int, ...]], ...] = (
    (0, (-1,)),
    (1, (1, 1)),
    (2, (1, 1, 1, 1, 1)),
    (3, (2, 1, 1, 1, 1, 1, 1)),
    (4, (2, 2, 2, 1, 1, 1, 1, 1)),
    (5, (2, 2, 2, 2, 2, 2, 1, 1)),
    (6, (3, 2, 2, 2, 2, 2, 2, 2)),
)

# Uniform (d, m) is effective iff d >= epsilon*m, nef iff d >= eta*m
EPSILON: Dict[int, Fraction] = {
    1: Fraction(1), 2: Fraction(1), 3: Fraction(3, 2), 4: Fraction(2), 5: Fraction(2),
    6: Fraction(12, 5), 7: Fraction(21, 8), 8: Fraction(48, 17), 9: Fraction(3),
}
ETA: Dict[int, Fraction] = {
    1: Fraction(1), 2: Fraction(2), 3: Fraction(2), 4: Fraction(2), 5: Fraction(5, 2),
    6: Fraction(5, 2), 7: Fraction(8, 3), 8: Fraction(17, 6), 9: Fraction(3),
}

# (d, m) of the uniform class whose multiples carry the fixed part of uniform classes
ABNORMAL_CLASSES: Dict[int, Tuple[int, int]] = {
    2: (1, 1), 3: (3, 2), 5: (2, 1), 6: (12, 5), 7: (21, 8), 8: (48, 17),
}


@dataclass(frozen=True)
class ExceptionalClassSet:
    r: int
    classes: Tuple[DivisorClass, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)


@dataclass(frozen=True)
class UniformThresholds:
    r: int
    epsilon: Fraction
    eta: Fraction


@dataclass(frozen=True)
class ZariskiDecomposition:
    """F = H + N with H nef and N = sum of multiplicity * class over parts."""

    F: DivisorClass
    H: DivisorClass
    N: DivisorClass
    parts: Tuple[Tuple[DivisorClass, int], ...]

    def to_json(self) -> dict:
        return {
            'F': self.F.to_json(),
            'H': self.H.to_json(),
            'N': self.N.to_json(),
            'parts': [{'class': c.to_json(), 'multiplicity': k} for c, k in self.parts],
        }


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@lru_cache(maxsize=None)
def _exceptional_classes(r: int) -> Tuple[DivisorClass, ...]:
    found = set()
    for d, pattern in EXCEPTIONAL_TYPES:
        if len(pattern) > r:
            continue
        for perm in multiset_permutations(list(pattern) + [0] * (r - len(pattern))):
            found.add(DivisorClass(d, tuple(perm)))
    return tuple(sorted(found, key=lambda c: c.coeffs))


def exceptional_classes(r: int) -> ExceptionalClassSet:
    """All (-1)-classes on the blow-up of r <= 8 general points."""
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}")
    if r > 8:
        raise UnsupportedError(f"There are infinitely many exceptional classes for r={r}")
    return ExceptionalClassSet(r, _exceptional_classes(r))


def thresholds(r: int) -> UniformThresholds:
    if r not in EPSILON:
        raise UnsupportedError(f"No uniform thresholds are known for r={r}")
    return UniformThresholds(r, EPSILON[r], ETA[r])


def _model_for(F: DivisorClass, model: Optional[PointModel]) -> PointModel:
    if model is None:
        return PointModel.for_points(F.r)
    model.check(F.r)
    return model


def is_nef(F: DivisorClass, model: Optional[PointModel] = None) -> bool:
    """
    Test F.C >= 0 for every effective C.

    For r <= 8 the test runs over the exceptional classes, e0 and the rulings
    e0 - e_i. For r >= 9 it checks that the Weyl normal form lies in the
    chamber; the nef cone is W-invariant, so this is the chamber criterion for
    classes that are not sorted. Results for r >= 10 are conjectural.
    """
    model = _model_for(F, model)
    if F.r <= 8:
        if F.d < 0:
            return False
        if any(F.d - a < 0 for a in F.m):
            return False
        return all(intersect(F, E) >= 0 for E in _exceptional_classes(F.r))
    return is_chamber(weyl_normal_form(F).output)


def is_effective(F: DivisorClass, model: Optional[PointModel] = None) -> bool:
    """h^0(F) > 0."""
    model = _model_for(F, model)
    if F.is_uniform() and F.m[0] >= 0 and F.r <= 9:
        return F.d >= 0 and F.d * EPSILON[F.r].denominator >= EPSILON[F.r].numerator * F.m[0]
    out = chamber_reduce(F).output
    if out.d < 0:
        return False
    if model.kind is PointKind.CONJECTURAL:
        return chi(out) > 0
    return True


def uniform_alpha_degree(r: int, m: int, model: Optional[PointModel] = None) -> int:
    """Least d such that d*e0 - m*(e1 + ... + er) is effective."""
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if r <= 9:
        return ceil_fraction(EPSILON[r] * m)
    # least d with binom(d + 2, 2) > r*binom(m + 1, 2)
    target = r * comb(m + 1, 2)
    d = max(0, isqrt(2 * target) - 2)
    while comb(d + 2, 2) <= target:
        d += 1
    return d


def uniform_beta_degree(r: int, m: int, model: Optional[PointModel] = None) -> int:
    """Least d such that d*e0 - m*(e1 + ... + er) is nef."""
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if r > 9:
        raise UnsupportedError(f"The nef threshold is unknown for r={r}")
    return ceil_fraction(ETA[r] * m)


def uniform_abnormal_class(r: int) -> Optional[DivisorClass]:
    """The uniform class with negative self-intersection for r in {2, 3, 5, 6, 7, 8}."""
    if r not in ABNORMAL_CLASSES:
        return None
    d, m = ABNORMAL_CLASSES[r]
    return DivisorClass.uniform(r, d, m)


def _collect(parts: Dict[DivisorClass, int], F: DivisorClass) -> ZariskiDecomposition:
    N = DivisorClass.zero(F.r)
    for c, k in parts.items():
        N = N + k * c
    ordered = tuple(sorted(((c, k) for c, k in parts.items() if k > 0), key=lambda item: item[0].coeffs))
    return ZariskiDecomposition(F, F - N, N, ordered)


def _anticanonical_corner(F: DivisorClass, model: PointModel) -> Dict[DivisorClass, int]:
    """Fixed multiple of -K inside s*(-K) on the cubic model."""
    s = F.m[0]
    a = model.cubic_a(s)
    fixed = s - a * (model.order or 0)
    return {-canonical_class(F.r): fixed} if fixed > 0 else {}


def is_anticanonical_multiple(x: DivisorClass) -> bool:
    return x.r == 9 and x.is_uniform() and x.m[0] > 0 and x.d == 3 * x.m[0]


def fixed_part(F: DivisorClass, model: Optional[PointModel] = None) -> ZariskiDecomposition:
    """
    Fixed components of |F| read off the chamber reduction.

    A clamp of amount c at index j after the Weyl steps w contributes c*w^-1(e_j);
    a terminal s*(-K) on the cubic model keeps only a*l*(-K) as moving part.
    """
    model = _model_for(F, model)
    if F.r < 3:
        padded = fixed_part(F.padded(3), PointModel.for_points(3))
        projected = {c.restricted(range(1, F.r + 1)): k for c, k in padded.parts}
        return _collect(projected, F)
    trace = chamber_reduce(F)
    if trace.output.d < 0:
        raise DomainError(f"Class {F} is not effective")
    parts: Dict[DivisorClass, int] = {}
    for position, step in enumerate(trace.steps):
        if step.operation != CLAMP:
            continue
        index, amount = step.detail
        component = pull_back(trace, position, DivisorClass.e(F.r, index))
        parts[component] = parts.get(component, 0) + amount
    if model.kind is PointKind.CUBIC and is_anticanonical_multiple(trace.output):
        for c, k in _anticanonical_corner(trace.output, model).items():
            parts[c] = parts.get(c, 0) + k
    return _collect(parts, F)


def zariski_decompose(F: DivisorClass, model: Optional[PointModel] = None) -> ZariskiDecomposition:
    """
    Split an effective F into its nef part H and fixed part N.

    For r <= 8 every exceptional E with F.E < 0 is subtracted (-F.E) times,
    recomputing after each subtraction. Uniform r = 9 classes follow the cubic
    model; everything else goes through fixed_part.
    """
    model = _model_for(F, model)
    if not is_effective(F, model):
        raise DomainError(f"Class {F} is not effective")
    if F.r <= 8:
        parts: Dict[DivisorClass, int] = {}
        current = F
        changed = True
        while changed:
            changed = False
            for E in _exceptional_classes(F.r):
                k = intersect(current, E)
                if k < 0:
                    parts[E] = parts.get(E, 0) - k
                    current = current + k * E
                    changed = True
        decomposition = _collect(parts, F)
        logger.debug(f"Zariski decomposition of {F}: H={decomposition.H}, N={decomposition.N}")
        return decomposition
    if F.r == 9 and F.is_uniform() and F.m[0] >= 0:
        t = F.d - 3 * F.m[0]
        if t > 0 or F.m[0] == 0:
            return _collect({}, F)
        return _collect(_anticanonical_corner(F, model), F)
    return fixed_part(F, model)
