"""
Error types and input validation for the fat point resolution toolkit.

Every error raised on purpose by the library derives from ValidationError,
except VerificationError (a disagreement between two computations, not bad
input) and ResolutionError (a broken internal invariant).
"""
import json
import re
from typing import Iterable, List, Optional, Sequence, Tuple


class ValidationError(ValueError):
    """Raised when input validation fails."""
    pass


class DomainError(ValidationError):
    """Raised when a mathematical precondition of an operation does not hold."""
    pass


class DimensionError(DomainError):
    """Raised when two classes live in Picard lattices of different rank."""
    pass


class UnsupportedError(DomainError):
    """Raised for inputs outside the point models the closed forms cover."""
    pass


class TheoryGapError(UnsupportedError):
    """Raised when no closed form is known for the requested value.

    The oracle (``verify`` / ``betti --oracle``) can still compute it.
    """
    pass


class CharacteristicError(DomainError):
    """Raised when the prime is unusable for the requested degrees."""
    pass


class DegeneracyError(DomainError):
    """Raised when random point sampling keeps producing special positions."""
    pass


class VerificationError(RuntimeError):
    """Raised when the oracle and the closed forms disagree after resampling."""
    pass


class ResolutionError(AssertionError):
    """Raised when a computed resolution violates an invariant (a bug, not bad input)."""
    pass


def validate_point_count(r: int, minimum: int = 1, maximum: Optional[int] = None) -> int:
    """
    Validate the number of points r.

    Raises:
        DomainError: If r is not an integer in [minimum, maximum]
    """
    if isinstance(r, bool) or not isinstance(r, int):
        raise DomainError(f"Point count must be an integer, got {r!r}")
    if r < minimum:
        raise DomainError(f"Point count must be at least {minimum}, got {r}")
    if maximum is not None and r > maximum:
        raise UnsupportedError(f"Point count {r} exceeds the supported maximum {maximum}")
    return r


def validate_multiplicities(mults: Iterable[int], allow_zero_scheme: bool = False) -> Tuple[int, ...]:
    """
    Validate a multiplicity vector m_1..m_r of a fat point scheme.

    Args:
        mults: The multiplicities
        allow_zero_scheme: Accept the all-zero vector

    Returns:
        The multiplicities as a tuple

    Raises:
        DomainError: If any multiplicity is negative or all are zero
    """
    values = tuple(mults)
    if not values:
        raise DomainError("At least one point is required")
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int):
            raise DomainError(f"Multiplicities must be integers, got {value!r}")
        if value < 0:
            raise DomainError(f"Multiplicities must be nonnegative, got {value}")
    if not allow_zero_scheme and not any(values):
        raise DomainError("At least one multiplicity must be positive")
    return values


def parse_multiplicities(text: str) -> Tuple[int, ...]:
    """Parse a comma separated multiplicity list such as ``"3,2,2,1,1"``."""
    parts = [part.strip() for part in text.split(',') if part.strip()]
    if not parts:
        raise ValidationError("Empty multiplicity list")
    try:
        values = [int(part) for part in parts]
    except ValueError as e:
        raise ValidationError(f"Invalid multiplicity list {text!r}: {e}")
    return validate_multiplicities(values)


def parse_degree_range(text: str) -> Tuple[int, int]:
    """
    Parse a degree range ``"a..b"`` (inclusive) or a single degree ``"a"``.

    Raises:
        ValidationError: If the range is malformed or empty
    """
    match = re.fullmatch(r'\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?', text)
    if not match:
        raise ValidationError(f"Invalid degree range {text!r}; expected a..b")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if high < low:
        raise ValidationError(f"Empty degree range {text!r}")
    return low, high


def parse_order(text: str) -> Optional[int]:
    """Parse the r = 9 order parameter: ``inf`` or a positive integer."""
    value = text.strip().lower()
    if value in ('inf', 'infinite', 'infinity'):
        return None
    try:
        order = int(value)
    except ValueError:
        raise ValidationError(f"Invalid order {text!r}; expected a positive integer or 'inf'")
    if order < 1:
        raise ValidationError(f"Order must be positive, got {order}")
    return order


def parse_divisor_class(text: str) -> Tuple[int, Tuple[int, ...]]:
    """
    Parse a divisor class given as ``"d;m1,...,mr"`` or ``{"d": d, "m": [...]}``.

    Returns:
        The pair (d, (m1, ..., mr)), meaning d*e0 - m1*e1 - ... - mr*er
    """
    text = text.strip()
    if text.startswith('{'):
        try:
            data = json.loads(text)
            d = data['d']
            mults: Sequence[int] = data['m']
        except (ValueError, KeyError, TypeError) as e:
            raise ValidationError(f"Invalid class JSON {text!r}: {e}")
    else:
        head, sep, tail = text.partition(';')
        if not sep:
            raise ValidationError(f"Invalid class {text!r}; expected d;m1,...,mr")
        try:
            d = int(head)
            mults = [int(part) for part in tail.split(',') if part.strip()]
        except ValueError as e:
            raise ValidationError(f"Invalid class {text!r}: {e}")
    if not isinstance(d, int) or not all(isinstance(value, int) for value in mults):
        raise ValidationError(f"Class coefficients must be integers: {text!r}")
    if not mults:
        raise ValidationError("A class needs at least one exceptional coefficient")
    return d, tuple(mults)


def parse_int_list(text: str) -> List[int]:
    """Parse ``"7,8,9"`` or a range ``"7..9"`` into a list of integers."""
    if '..' in text:
        low, high = parse_degree_range(text)
        return list(range(low, high + 1))
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise ValidationError(f"Invalid integer list {text!r}: {e}")
