"""
Picard lattice of the blow-up of P^2 at r points.

A class is stored as (d; m_1, ..., m_r) and stands for d*e0 - m_1*e1 - ... - m_r*er,
so the exceptional curve e_i has m_i = -1 and uniform fat point classes have
positive multiplicities. The intersection form is d*d' - sum m_i*m_i'.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from src.utils.logging_config import get_logger
from src.utils.validation import DimensionError, DomainError, ValidationError

logger = get_logger(__name__)

SORT = "sort"
CREMONA = "cremona"
CLAMP = "clamp"


@dataclass(frozen=True)
class DivisorClass:
    """Integer class d*e0 - sum m_i*e_i on the blow-up of r points."""

    d: int
    m: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.m, tuple):
            object.__setattr__(self, 'm', tuple(self.m))
        if len(self.m) < 1:
            raise DomainError("A divisor class needs r >= 1 exceptional coefficients")

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return (self.d,) + self.m

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> 'DivisorClass':
        if len(coeffs) < 2:
            raise DomainError("Coefficient vector must have length r + 1 >= 2")
        return cls(int(coeffs[0]), tuple(int(c) for c in coeffs[1:]))

    @classmethod
    def uniform(cls, r: int, d: int, m: int) -> 'DivisorClass':
        """The class d*e0 - m*(e1 + ... + er)."""
        if r < 1:
            raise DomainError(f"r must be at least 1, got {r}")
        return cls(d, (m,) * r)

    @classmethod
    def zero(cls, r: int) -> 'DivisorClass':
        return cls.uniform(r, 0, 0)

    @classmethod
    def e(cls, r: int, i: int) -> 'DivisorClass':
        """Basis class e_i; e_0 is the pullback of a line."""
        if not 0 <= i <= r:
            raise DomainError(f"Basis index {i} out of range for r={r}")
        if i == 0:
            return cls(1, (0,) * r)
        m = [0] * r
        m[i - 1] = -1
        return cls(0, tuple(m))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'DivisorClass':
        try:
            return cls(int(data['d']), tuple(int(x) for x in data['m']))
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Invalid divisor class payload {data!r}: {e}")

    def to_json(self) -> Dict[str, Any]:
        return {'d': self.d, 'm': list(self.m)}

    def is_uniform(self) -> bool:
        return len(set(self.m)) == 1

    def sorted(self) -> 'DivisorClass':
        return DivisorClass(self.d, tuple(sorted(self.m, reverse=True)))

    def support(self) -> Tuple[int, ...]:
        """1-based indices with a nonzero multiplicity."""
        return tuple(i + 1 for i, value in enumerate(self.m) if value != 0)

    def restricted(self, indices: Iterable[int]) -> 'DivisorClass':
        """The class on the blow-up of the points with the given 1-based indices."""
        return DivisorClass(self.d, tuple(self.m[i - 1] for i in indices))

    def padded(self, r: int) -> 'DivisorClass':
        if r < self.r:
            raise DimensionError(f"Cannot pad a class on {self.r} points down to {r}")
        return DivisorClass(self.d, self.m + (0,) * (r - self.r))

    def _check(self, other: 'DivisorClass') -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"Expected DivisorClass, got {type(other).__name__}")
        if other.r != self.r:
            raise DimensionError(f"Classes live on r={self.r} and r={other.r}")

    def __add__(self, other: 'DivisorClass') -> 'DivisorClass':
        self._check(other)
        return DivisorClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: 'DivisorClass') -> 'DivisorClass':
        self._check(other)
        return DivisorClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def __neg__(self) -> 'DivisorClass':
        return DivisorClass(-self.d, tuple(-a for a in self.m))

    def __mul__(self, k: int) -> 'DivisorClass':
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return DivisorClass(k * self.d, tuple(k * a for a in self.m))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.d}; {', '.join(str(a) for a in self.m)})"


@dataclass(frozen=True)
class WeylWord:
    """A word in the simple reflections s_0, ..., s_{r-1}, applied left to right."""

    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, 'letters', tuple(self.letters))

    def validate(self, r: int) -> None:
        for i in self.letters:
            _check_root_index(r, i)

    def inverse(self) -> 'WeylWord':
        return WeylWord(tuple(reversed(self.letters)))

    def then(self, i: int) -> 'WeylWord':
        return WeylWord(self.letters + (i,))

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class ReductionStep:
    """
    One recorded step of a reduction.

    operation is "sort" (detail: permutation, new position k holds old index
    detail[k]), "cremona" (detail: amounts dropped on virtual points when r < 3)
    or "clamp" (detail: (1-based index, clamped amount)).
    """

    operation: str
    detail: Tuple[int, ...]
    result: DivisorClass

    def to_json(self) -> Dict[str, Any]:
        return {'operation': self.operation, 'detail': list(self.detail), 'result': self.result.to_json()}


@dataclass(frozen=True)
class ReductionTrace:
    input: DivisorClass
    steps: Tuple[ReductionStep, ...]
    output: DivisorClass

    @property
    def cremona_steps(self) -> int:
        return sum(1 for step in self.steps if step.operation == CREMONA)

    @property
    def clamps(self) -> List[Tuple[int, int]]:
        return [(step.detail[0], step.detail[1]) for step in self.steps if step.operation == CLAMP]

    def to_json(self) -> Dict[str, Any]:
        return {
            'input': self.input.to_json(),
            'steps': [step.to_json() for step in self.steps],
            'output': self.output.to_json(),
        }


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    """Intersection number a.b = a.d*b.d - sum a.m_i*b.m_i."""
    a._check(b)
    return a.d * b.d - sum(x * y for x, y in zip(a.m, b.m))


def self_intersection(a: DivisorClass) -> int:
    return a.d * a.d - sum(x * x for x in a.m)


def canonical_class(r: int) -> DivisorClass:
    """K = -3e0 + e1 + ... + er."""
    if isinstance(r, bool) or not isinstance(r, int) or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    return DivisorClass(-3, (-1,) * r)


def anticanonical_degree(a: DivisorClass) -> int:
    """-K.a = 3d - sum m_i."""
    return 3 * a.d - sum(a.m)


def chi(a: DivisorClass) -> int:
    """Riemann-Roch value (F.F - K.F)/2 + 1."""
    return (self_intersection(a) + anticanonical_degree(a)) // 2 + 1


def _check_root_index(r: int, i: int) -> None:
    if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i <= r - 1:
        raise DomainError(f"Root index {i!r} out of range 0..{r - 1}")
    if i == 0 and r < 3:
        raise DomainError(f"The root e0 - e1 - e2 - e3 needs r >= 3, got r={r}")


def root(r: int, i: int) -> DivisorClass:
    """rho_0 = e0 - e1 - e2 - e3 and rho_i = e_i - e_{i+1}."""
    _check_root_index(r, i)
    m = [0] * r
    if i == 0:
        m[0] = m[1] = m[2] = 1
        return DivisorClass(1, tuple(m))
    m[i - 1] = -1
    m[i] = 1
    return DivisorClass(0, tuple(m))


def _cremona(x: DivisorClass) -> DivisorClass:
    delta = x.d - x.m[0] - x.m[1] - x.m[2]
    m = list(x.m)
    for k in range(3):
        m[k] += delta
    return DivisorClass(x.d + delta, tuple(m))


def reflect(x: DivisorClass, i: int) -> DivisorClass:
    """s_i(x) = x + (x.rho_i) rho_i."""
    _check_root_index(x.r, i)
    if i == 0:
        return _cremona(x)
    m = list(x.m)
    m[i - 1], m[i] = m[i], m[i - 1]
    return DivisorClass(x.d, tuple(m))


def apply_word(x: DivisorClass, w: WeylWord) -> DivisorClass:
    """Apply the letters of w to x in order, first letter first."""
    w.validate(x.r)
    for i in w.letters:
        x = reflect(x, i)
    return x


def _sort_step(x: DivisorClass) -> Optional[ReductionStep]:
    perm = tuple(sorted(range(x.r), key=lambda k: (-x.m[k], k)))
    if perm == tuple(range(x.r)):
        return None
    return ReductionStep(SORT, perm, DivisorClass(x.d, tuple(x.m[k] for k in perm)))


def _virtual_cremona(x: DivisorClass) -> Tuple[DivisorClass, Tuple[int, ...]]:
    """Quadratic transformation on r < 3 points, padding with virtual points of multiplicity 0."""
    padded = _cremona(x.padded(3))
    dropped = tuple(-a for a in padded.m[x.r:])
    return DivisorClass(padded.d, padded.m[:x.r]), dropped


def is_chamber(x: DivisorClass) -> bool:
    """Sorted, nonnegative and d >= m1 + m2 + m3 (missing points count as 0)."""
    top = sorted(x.m, reverse=True)
    if top[-1] < 0 or list(x.m) != top:
        return False
    return x.d >= sum((top + [0, 0])[:3])


def _reduce(x: DivisorClass, clamp: bool) -> ReductionTrace:
    steps: List[ReductionStep] = []
    current = x
    while True:
        sort_step = _sort_step(current)
        if sort_step is not None:
            steps.append(sort_step)
            current = sort_step.result
        if current.d < 0:
            break
        top3 = sum((list(current.m) + [0, 0])[:3])
        if current.d < top3:
            if current.r >= 3:
                current = _cremona(current)
                steps.append(ReductionStep(CREMONA, (), current))
                continue
            if not clamp:
                break
            current, dropped = _virtual_cremona(current)
            steps.append(ReductionStep(CREMONA, dropped, current))
            continue
        if clamp and current.m[-1] < 0:
            m = list(current.m)
            for k in range(current.r):
                if m[k] < 0:
                    amount = -m[k]
                    m[k] = 0
                    current = DivisorClass(current.d, tuple(m))
                    steps.append(ReductionStep(CLAMP, (k + 1, amount), current))
            continue
        break
    trace = ReductionTrace(x, tuple(steps), current)
    logger.debug(f"Reduced {x} to {current} in {len(steps)} steps")
    return trace


def chamber_reduce(x: DivisorClass) -> ReductionTrace:
    """
    Reduce x to the fundamental chamber, stripping fixed exceptional curves.

    Alternates sorting the multiplicities, the quadratic transformation s_0
    while d < m1 + m2 + m3, and clamping negative multiplicities to 0. The
    output is either non-effective (d < 0) or sorted, nonnegative and has
    d >= m1 + m2 + m3. h^0 is constant along every step.
    """
    return _reduce(x, clamp=True)


def weyl_normal_form(x: DivisorClass) -> ReductionTrace:
    """Like chamber_reduce but without clamps, so the output stays in the W-orbit of x."""
    return _reduce(x, clamp=False)


def replay_step(step: ReductionStep, x: DivisorClass) -> DivisorClass:
    if step.operation == SORT:
        return DivisorClass(x.d, tuple(x.m[k] for k in step.detail))
    if step.operation == CREMONA:
        if x.r >= 3:
            return _cremona(x)
        return _virtual_cremona(x)[0]
    if step.operation == CLAMP:
        index, amount = step.detail
        m = list(x.m)
        m[index - 1] += amount
        return DivisorClass(x.d, tuple(m))
    raise ValidationError(f"Unknown reduction step {step.operation!r}")


def replay(trace: ReductionTrace) -> DivisorClass:
    """Re-apply every recorded step to the input."""
    current = trace.input
    for step in trace.steps:
        current = replay_step(step, current)
    return current


def pull_back(trace: ReductionTrace, upto: int, v: DivisorClass) -> DivisorClass:
    """
    Map v, expressed in the coordinates reached after the first `upto` steps,
    back to the coordinates of trace.input by undoing the Weyl steps.

    Clamps are not Weyl steps and are skipped. Virtual cremona steps (r < 3)
    have no inverse and are rejected.
    """
    for step in reversed(trace.steps[:upto]):
        if step.operation == SORT:
            m = [0] * v.r
            for k, old in enumerate(step.detail):
                m[old] = v.m[k]
            v = DivisorClass(v.d, tuple(m))
        elif step.operation == CREMONA:
            if v.r < 3:
                raise DomainError("Cannot pull back through a virtual quadratic transformation")
            v = _cremona(v)
    return v
