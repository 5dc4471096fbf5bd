"""
Oracle for fat point ideals: interpolation matrices at random points of the
affine chart z = 1 over GF(p), and comparison against the closed forms.

dim I(Z)_d is the corank of the Taylor conditions of order < m_i at each
point; mu_d is realized by multiplying a basis of I(Z)_d by x, y and z.
"""
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import isprime

from config.settings import settings
from src.algebra.cohomology import HilbertProfile, h0, profile
from src.algebra.resolution import BettiTable, SYZYGY_SCAN, assemble_betti, s_general, syzygies_from_balance
from src.lattice.models import FatPointScheme
from src.oracle.linalg import MAX_PRIME, nullspace_mod_p, rank_mod_p
from src.utils.logging_config import get_logger
from src.utils.validation import (
    CharacteristicError,
    DegeneracyError,
    TheoryGapError,
    UnsupportedError,
    VerificationError,
)

logger = get_logger(__name__)

Point = Tuple[int, int, int]

# six-on-a-conic checks grow as binom(r, 6); skip them beyond this many points
CONIC_CHECK_MAX_POINTS = 12


class OracleConfig(BaseModel):
    prime: int = Field(default_factory=lambda: settings.ORACLE_PRIME, lt=MAX_PRIME)
    seed: int = Field(default_factory=lambda: settings.ORACLE_SEED)
    max_degree: int = Field(default_factory=lambda: settings.ORACLE_MAX_DEGREE, ge=1)
    resample_limit: int = Field(default_factory=lambda: settings.ORACLE_RESAMPLE_LIMIT, ge=1)

    @field_validator('prime')
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} is not prime")
        return value

    @model_validator(mode='after')
    def _check_characteristic(self) -> 'OracleConfig':
        if self.prime <= self.max_degree + 1:
            raise ValueError(f"prime {self.prime} must exceed max_degree + 1 = {self.max_degree + 1}")
        return self

    def check_degree(self, d: int) -> None:
        if d > self.max_degree:
            raise UnsupportedError(f"Degree {d} exceeds the oracle limit {self.max_degree}")
        if self.prime <= d:
            raise CharacteristicError(f"Prime {self.prime} is too small for degree {d}")


class MuRank(BaseModel):
    degree: int
    dim_I: int
    dim_I_next: int
    rank: int
    ker: int
    coker: int


class OracleRow(BaseModel):
    degree: int
    closed: Dict[str, Optional[int]]
    oracle: Dict[str, int]
    match: bool


class OracleReport(BaseModel):
    r: int
    multiplicities: List[int]
    order: Optional[int] = None
    prime: int
    seed: int
    points: List[List[int]]
    resamples: int = 0
    hilbert_only: bool = False
    rows: List[OracleRow] = Field(default_factory=list)
    match: bool
    conjectural: bool = False


@lru_cache(maxsize=None)
def monomials(d: int) -> Tuple[Tuple[int, int], ...]:
    """Exponents (a, b) of x^a y^b z^(d-a-b)."""
    return tuple((a, b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


@lru_cache(maxsize=None)
def _monomial_index(d: int) -> Dict[Tuple[int, int], int]:
    return {mono: k for k, mono in enumerate(monomials(d))}


def _collinear(P: Point, Q: Point, R: Point, p: int) -> bool:
    det = P[0] * (Q[1] * R[2] - Q[2] * R[1]) - P[1] * (Q[0] * R[2] - Q[2] * R[0]) + P[2] * (Q[0] * R[1] - Q[1] * R[0])
    return det % p == 0


def _on_conic(six: Sequence[Point], p: int) -> bool:
    rows = [[(u * v) % p for u, v in ((x, x), (x, y), (y, y), (x, z), (y, z), (z, z))] for x, y, z in six]
    return rank_mod_p(np.array(rows, dtype=np.int64), p) < 6


def in_general_position(points: Sequence[Point], p: int) -> bool:
    if len(set(points)) != len(points):
        return False
    if any(_collinear(P, Q, R, p) for P, Q, R in combinations(points, 3)):
        return False
    if 6 <= len(points) <= CONIC_CHECK_MAX_POINTS:
        return not any(_on_conic(six, p) for six in combinations(points, 6))
    return True


def sample_points(r: int, cfg: OracleConfig, attempt: int = 0) -> List[Point]:
    """
    r points (a, b, 1) in general position, deterministic in (seed, attempt).

    Raises:
        DegeneracyError: If resample_limit draws all land in special position
    """
    if cfg.prime <= r:
        raise CharacteristicError(f"Prime {cfg.prime} is too small for {r} distinct points")
    for draw in range(cfg.resample_limit):
        rng = np.random.default_rng([cfg.seed, attempt, draw])
        coords = rng.integers(0, cfg.prime, size=(r, 2))
        points = [(int(a), int(b), 1) for a, b in coords]
        if in_general_position(points, cfg.prime):
            return points
        logger.debug(f"Draw {draw} of attempt {attempt} is in special position, resampling")
    raise DegeneracyError(f"No general position sample of {r} points after {cfg.resample_limit} draws")


def conditions_matrix(Z: FatPointScheme, d: int, points: Sequence[Point], p: int) -> np.ndarray:
    """
    Rows: coefficients of (x-a)^i (y-b)^j, i + j < m, of each degree d monomial
    at each point (a, b). Columns: monomials(d).
    """
    mons = monomials(d)
    rows: List[List[int]] = []
    for (a, b, _), m in zip(points, Z.multiplicities):
        for i in range(m):
            for j in range(m - i):
                rows.append([
                    comb(x, i) * comb(y, j) * pow(a, x - i, p) * pow(b, y - j, p) % p if x >= i and y >= j else 0
                    for x, y in mons
                ])
    if not rows:
        return np.zeros((0, len(mons)), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def dim_ideal(Z: FatPointScheme, d: int, points: Sequence[Point], p: int) -> int:
    A = conditions_matrix(Z, d, points, p)
    return A.shape[1] - rank_mod_p(A, p)


def mu_rank(Z: FatPointScheme, d: int, points: Sequence[Point], p: int) -> MuRank:
    """Rank of I(Z)_d (x) <x, y, z> -> I(Z)_{d+1}."""
    basis = nullspace_mod_p(conditions_matrix(Z, d, points, p), p)
    dim_next = dim_ideal(Z, d + 1, points, p)
    k = basis.shape[0]
    if k == 0:
        return MuRank(degree=d, dim_I=0, dim_I_next=dim_next, rank=0, ker=0, coker=dim_next)
    index = _monomial_index(d + 1)
    mons = monomials(d)
    image = np.zeros((3 * k, len(index)), dtype=np.int64)
    for shift, (dx, dy) in enumerate(((1, 0), (0, 1), (0, 0))):
        targets = [index[(x + dx, y + dy)] for x, y in mons]
        image[shift * k:(shift + 1) * k, targets] = basis
    rank = rank_mod_p(image, p)
    return MuRank(degree=d, dim_I=k, dim_I_next=dim_next, rank=rank, ker=3 * k - rank, coker=dim_next - rank)


def _closed_rows(Z: FatPointScheme, low: int, high: int) -> Tuple[Dict[int, Dict[str, Optional[int]]], bool]:
    rows: Dict[int, Dict[str, Optional[int]]] = {}
    hilbert_only = False
    for d in range(low, high + 1):
        rows[d] = {'dim': h0(Z.divisor(d), Z.model), 'ker': None, 'nu_next': None}
    try:
        for d in range(low, high + 1):
            mu = s_general(Z.divisor(d), Z.model)
            rows[d]['ker'] = mu.R
            rows[d]['nu_next'] = mu.S
    except TheoryGapError as e:
        logger.warning(f"Comparing Hilbert data only: {e}")
        hilbert_only = True
        for row in rows.values():
            row['ker'] = row['nu_next'] = None
    return rows, hilbert_only


def verify(Z: FatPointScheme, cfg: Optional[OracleConfig] = None, prof: Optional[HilbertProfile] = None) -> OracleReport:
    """
    Compare dim I(Z)_d, dim ker mu_d and nu_{d+1} for alpha - 1 <= d <= tau + 2.

    Special points can only make dim I(Z)_d larger, so a mismatch is retried
    with fresh points before it is reported.

    Raises:
        VerificationError: If every attempt disagrees with the closed forms
    """
    if cfg is None:
        cfg = OracleConfig()
    if prof is None:
        prof = profile(Z)
    low, high = max(prof.alpha - 1, 0), prof.tau + 2
    cfg.check_degree(high + 1)
    closed, hilbert_only = _closed_rows(Z, low, high)
    mismatched: List[int] = []
    for attempt in range(cfg.resample_limit):
        points = sample_points(Z.r, cfg, attempt)
        rows: List[OracleRow] = []
        for d in range(low, high + 1):
            mu = mu_rank(Z, d, points, cfg.prime)
            oracle = {'dim': mu.dim_I, 'ker': mu.ker, 'nu_next': mu.coker}
            expected = closed[d]
            match = expected['dim'] == mu.dim_I and (
                hilbert_only or (expected['ker'] == mu.ker and expected['nu_next'] == mu.coker)
            )
            rows.append(OracleRow(degree=d, closed=dict(expected), oracle=oracle, match=match))
        mismatched = [row.degree for row in rows if not row.match]
        if not mismatched:
            logger.info(f"Oracle agrees with the closed forms for {Z.multiplicities} (attempt {attempt})")
            return OracleReport(
                r=Z.r,
                multiplicities=list(Z.multiplicities),
                order=Z.model.order,
                prime=cfg.prime,
                seed=cfg.seed,
                points=[list(P) for P in points],
                resamples=attempt,
                hilbert_only=hilbert_only,
                rows=rows,
                match=True,
                conjectural=Z.conjectural,
            )
        for row in rows:
            if not row.match:
                logger.warning(f"Attempt {attempt}, degree {row.degree}: closed {row.closed}, oracle {row.oracle}")
    logger.error(
        f"Verification failed for {Z.multiplicities}: "
        + "; ".join(f"t={row.degree} closed {row.closed} oracle {row.oracle}" for row in rows if not row.match)
    )
    raise VerificationError(
        f"Oracle disagrees with the closed forms for {Z.multiplicities} in degrees {mismatched} "
        f"after {cfg.resample_limit} attempts"
    )


def oracle_betti(Z: FatPointScheme, cfg: Optional[OracleConfig] = None, prof: Optional[HilbertProfile] = None) -> BettiTable:
    """Betti table from oracle ranks, for schemes outside the closed forms."""
    if cfg is None:
        cfg = OracleConfig()
    if prof is None:
        prof = profile(Z)
    alpha, tau = prof.alpha, prof.tau
    high = tau + SYZYGY_SCAN
    cfg.check_degree(high)
    points = sample_points(Z.r, cfg)
    dims = {t: dim_ideal(Z, t, points, cfg.prime) for t in range(alpha, high + 1)}
    generators: Dict[int, int] = {alpha: dims[alpha]}
    for t in range(alpha, tau + 1):
        coker = mu_rank(Z, t, points, cfg.prime).coker
        if coker:
            generators[t + 1] = coker
    syzygies = syzygies_from_balance(generators, dims, alpha, high)
    return assemble_betti(Z, prof, generators, syzygies, source="oracle")
