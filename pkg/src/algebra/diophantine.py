"""
Number theory behind the r >= 10 maximal rank bounds: Pell equations,
odd convergents of sqrt(r), and the degree criteria that force q1 = 0 or l1 > 0.
"""
from math import comb, isqrt
from typing import List, Optional, Tuple

from sympy.solvers.diophantine.diophantine import diop_DN

from src.utils.logging_config import get_logger
from src.utils.validation import DomainError

logger = get_logger(__name__)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def pell_solutions(r: int, count: int) -> List[Tuple[int, int]]:
    """
    First `count` positive solutions (b, m) of b^2 - r*m^2 = 1, by increasing m.

    The fundamental solution comes from sympy; the rest follow from
    (b + m*sqrt(r))^k.
    """
    if r < 2 or is_square(r):
        raise DomainError(f"Pell equation needs a nonsquare r >= 2, got {r}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    fundamental = [(x, y) for x, y in diop_DN(r, 1) if x > 0 and y > 0]
    if not fundamental:
        raise DomainError(f"No fundamental Pell solution found for r={r}")
    b1, m1 = min(fundamental, key=lambda pair: pair[1])
    b1, m1 = int(b1), int(m1)
    solutions = [(b1, m1)]
    while len(solutions) < count:
        b, m = solutions[-1]
        solutions.append((b1 * b + r * m1 * m, b1 * m + m1 * b))
    return solutions


def odd_convergents(c: int, a: int, count: int, max_terms: Optional[int] = None) -> List[Tuple[int, int]]:
    """
    Odd pairs (p, q) with p^2 - r*q^2 = 4c^2 for r = (ca)^2 + 4c^2.

    Candidates are the convergents of sqrt(r) = ca + 2c/(a + 1/(a + 1/(a + ...))),
    kept when p and q are odd and the norm identity holds; such pairs have
    p/q > sqrt(r) automatically.
    """
    if c < 1 or a < 1 or c % 2 == 0 or a % 2 == 0:
        raise DomainError(f"c and a must be positive odd integers, got c={c}, a={a}")
    r = (c * a) ** 2 + 4 * c * c
    if r <= 9:
        raise DomainError(f"r = (ca)^2 + 4c^2 must exceed 9, got {r}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    if max_terms is None:
        max_terms = 6 * count + 12
    target = 4 * c * c
    # p_k = b_k*p_{k-1} + a_k*p_{k-2}; partial numerators 2c, 1, 1, ...
    p_prev, q_prev = 1, 0
    p, q = c * a, 1
    found: List[Tuple[int, int]] = []
    for k in range(1, max_terms + 1):
        numerator = 2 * c if k == 1 else 1
        p, p_prev = a * p + numerator * p_prev, p
        q, q_prev = a * q + numerator * q_prev, q
        if p % 2 == 1 and q % 2 == 1 and p * p - r * q * q == target:
            logger.debug(f"Convergent {k} of sqrt({r}): {p}/{q}")
            found.append((p, q))
            if len(found) == count:
                break
    return found


def q1_criterion(r: int, m: int, x: int) -> bool:
    """0 < binom(x+2, 2) - r*binom(m+1, 2) <= m + 1, so q1 = 0 in degree x."""
    h = comb(x + 2, 2) - r * comb(m + 1, 2)
    return 0 < h <= m + 1


def l1_criterion(r: int, m: int, x: int) -> bool:
    """x < binom(x+1, 2) - r*binom(m+1, 2) + m <= x + m, so l1 > 0 in degree x - 1."""
    value = comb(x + 1, 2) - r * comb(m + 1, 2) + m
    return x < value <= x + m


def odd_square_offset(r: int) -> Optional[int]:
    """The i in -3..4 making r + i an odd square, if any (at most one exists)."""
    for i in range(-3, 5):
        n = r + i
        if n > 0 and n % 2 == 1 and is_square(n):
            return i
    return None
