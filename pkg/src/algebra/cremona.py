"""
Weyl orbits of nef classes, Cremona equivalence of fat point schemes and
translations by the root sublattice T spanned by rho_1..rho_8 (r >= 9).
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.settings import settings
from src.algebra.cohomology import beta_degree
from src.lattice.cones import is_nef
from src.lattice.core import (
    DivisorClass,
    WeylWord,
    intersect,
    reflect,
    root,
    self_intersection,
    weyl_normal_form,
)
from src.lattice.models import FatPointScheme, PointModel
from src.utils.logging_config import get_logger
from src.utils.validation import DomainError, UnsupportedError

logger = get_logger(__name__)


@dataclass(frozen=True)
class OrbitElement:
    word: WeylWord
    divisor: DivisorClass
    certificate: Optional[int] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            'word': list(self.word.letters),
            'class': self.divisor.to_json(),
            'certificate': self.certificate,
        }


@dataclass(frozen=True)
class OrbitSlice:
    """Elements wG of the W-orbit of seed with wG.e0 <= bound, shortest word per class."""

    seed: DivisorClass
    bound: int
    elements: Tuple[OrbitElement, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.elements)

    def classes(self) -> List[DivisorClass]:
        return [element.divisor for element in self.elements]

    def to_json(self) -> Dict[str, Any]:
        return {
            'seed': self.seed.to_json(),
            'bound': self.bound,
            'size': len(self.elements),
            'elements': [element.to_json() for element in self.elements],
        }


@dataclass(frozen=True)
class OrbitExceptions:
    seed: DivisorClass
    bound: int
    total: int
    exceptions: Tuple[DivisorClass, ...]

    @property
    def fraction(self) -> float:
        return len(self.exceptions) / self.total if self.total else 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            'seed': self.seed.to_json(),
            'bound': self.bound,
            'total': self.total,
            'exceptions': [c.to_json() for c in self.exceptions],
            'fraction': self.fraction,
        }


def _letters(r: int) -> List[int]:
    return list(range(0 if r >= 3 else 1, r))


def mrp_certificate(wG: DivisorClass, G_squared: int) -> Optional[int]:
    """Least i > 0 with G^2 < e_i.wG and G^2 < (e0 - e_i).wG, if any."""
    for i, a in enumerate(wG.m, start=1):
        if G_squared < a and G_squared < wG.d - a:
            return i
    return None


def orbit_bounded(
    G: DivisorClass, bound: int, certify: bool = False, max_classes: Optional[int] = None
) -> OrbitSlice:
    """
    Breadth-first closure of G under the simple reflections, keeping classes
    of degree at most bound.

    Nef classes stay nef under W, so their orbit meets each degree finitely often.
    For r >= 10 that count grows very fast with bound; the walk stops with
    UnsupportedError once more than max_classes classes are found
    (settings.ORBIT_MAX_CLASSES by default).
    """
    if max_classes is None:
        max_classes = settings.ORBIT_MAX_CLASSES
    if bound < G.d:
        raise DomainError(f"Bound {bound} is below the degree of {G}")
    if not is_nef(G, PointModel.for_points(G.r)):
        raise DomainError(f"Orbit enumeration needs a nef seed, got {G}")
    G_squared = self_intersection(G)
    words: Dict[DivisorClass, WeylWord] = {G: WeylWord()}
    queue = deque([G])
    while queue:
        x = queue.popleft()
        for i in _letters(x.r):
            y = reflect(x, i)
            if y.d > bound or y in words:
                continue
            words[y] = words[x].then(i)
            if len(words) > max_classes:
                raise UnsupportedError(
                    f"Orbit of {G} up to degree {bound} has more than {max_classes} classes"
                )
            queue.append(y)
    elements = tuple(
        OrbitElement(word, c, mrp_certificate(c, G_squared) if certify else None)
        for c, word in sorted(words.items(), key=lambda item: (item[0].d, item[0].coeffs))
    )
    logger.debug(f"Orbit of {G} up to degree {bound}: {len(elements)} classes")
    return OrbitSlice(G, bound, elements)


def orbit_exceptions(G: DivisorClass, bound: int, max_classes: Optional[int] = None) -> OrbitExceptions:
    """Orbit elements up to degree bound without an mrp certificate, by degree."""
    orbit = orbit_bounded(G, bound, certify=True, max_classes=max_classes)
    missing = tuple(e.divisor for e in orbit.elements if e.certificate is None)
    return OrbitExceptions(G, bound, len(orbit), missing)


def is_orbit_infinite(F: DivisorClass) -> bool:
    """Whether the W-orbit of a nonzero nef F is infinite."""
    if F.d == 0 and not any(F.m):
        return False
    if F.r > 9:
        return True
    if F.r < 9:
        return False
    # F is a multiple of -K iff F is proportional to (3; 1, ..., 1)
    return not (F.is_uniform() and F.d == 3 * F.m[0])


def _h9(r: int) -> DivisorClass:
    return DivisorClass(3, (1,) * 9 + (0,) * (r - 9))


def validate_translation(v: DivisorClass) -> DivisorClass:
    """Check that v lies in T: degree 0, first nine coefficients summing to 0, the rest 0."""
    if v.r < 9:
        raise DomainError(f"Translations need r >= 9, got r={v.r}")
    if v.d != 0 or sum(v.m[:9]) != 0 or any(v.m[9:]):
        raise DomainError(f"{v} is not in the span of rho_1..rho_8")
    return v


def translation_vector(r: int, coeffs: Sequence[int]) -> DivisorClass:
    """sum c_i*rho_i over i = 1..len(coeffs) <= 8."""
    if r < 9:
        raise DomainError(f"Translations need r >= 9, got r={r}")
    if len(coeffs) > 8:
        raise DomainError(f"At most 8 root coefficients, got {len(coeffs)}")
    v = DivisorClass.zero(r)
    for i, c in enumerate(coeffs, start=1):
        v = v + int(c) * root(r, i)
    return v


def tau_v(G: DivisorClass, v: DivisorClass) -> DivisorClass:
    """G + k*v - (G.v + k*v^2/2)*H9 with k = G.H9 and H9 = 3e0 - e1 - ... - e9."""
    validate_translation(v)
    G._check(v)
    H9 = _h9(G.r)
    k = intersect(G, H9)
    v2 = self_intersection(v)
    # T is an even lattice, so k*v^2/2 is an integer
    shift = intersect(G, v) + k * v2 // 2
    return G + k * v - shift * H9


def _sqrt_gt(V: Fraction, A: Fraction, B: Fraction) -> bool:
    """Exactly decide sqrt(V) > A + sqrt(B) for V, B >= 0."""
    C = V - A * A - B
    if A >= 0:
        return C > 0 and C * C > 4 * A * A * B
    if B < A * A:
        return True
    if C > 0:
        return True
    return C * C < 4 * A * A * B


def tau_v_mrp_bound(G: DivisorClass, v: DivisorClass) -> bool:
    """
    sqrt(-v^2) > 2 + sqrt(24*G.e0/k) + 2*G^2/k with k = G.H9.

    When this holds, I(Z) for the translated class tau_v(G) has the maximal
    rank property.
    """
    validate_translation(v)
    k = intersect(G, _h9(G.r))
    if k <= 0:
        raise DomainError(f"G.H9 must be positive, got {k} for {G}")
    V = Fraction(-self_intersection(v))
    A = 2 + Fraction(2 * self_intersection(G), k)
    B = Fraction(24 * G.d, k)
    if B < 0:
        raise DomainError(f"G.e0 must be nonnegative, got {G.d}")
    return _sqrt_gt(V, A, B)


def cremona_equivalent(Z: FatPointScheme, other: FatPointScheme) -> bool:
    """Whether the beta-degree classes of Z and other lie in one W-orbit."""
    if Z.r != other.r or Z.model != other.model:
        raise DomainError("Cremona equivalence compares schemes on the same point model")
    F = Z.divisor(beta_degree(Z))
    F_other = other.divisor(beta_degree(other))
    same = weyl_normal_form(F).output == weyl_normal_form(F_other).output
    logger.debug(f"Cremona equivalence of {F} and {F_other}: {same}")
    return same
