"""
Multiplication maps mu_t: I(Z)_t (x) R_1 -> I(Z)_{t+1} and the minimal free resolution
0 -> F_1 -> F_0 -> I(Z) -> 0.

S (cokernel) comes from the free part of the Zariski decomposition, R (kernel)
from rank-nullity, the generators from nu_{t+1} = S(F_t) and the syzygies
from the Hilbert function balance.
"""
from math import comb
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.algebra.cohomology import HilbertProfile, h0, profile
from src.lattice.cones import is_nef, zariski_decompose
from src.lattice.core import DivisorClass
from src.lattice.models import FatPointScheme, PointModel
from src.utils.logging_config import get_logger
from src.utils.validation import DomainError, ResolutionError, TheoryGapError

logger = get_logger(__name__)

# syzygies are recovered up to tau + SYZYGY_SCAN and must vanish above tau + 2
SYZYGY_SCAN = 5


class MuDims(BaseModel):
    """Dimensions attached to mu_t for F = F_t."""
    degree: int
    h0_F: int
    h0_F_plus: int
    S: int = Field(..., description="dim coker mu_t")
    R: int = Field(..., description="dim ker mu_t")


class BettiTable(BaseModel):
    r: int
    multiplicities: List[int]
    order: Optional[int] = None
    alpha: int
    beta: int
    tau: int
    omega: int = Field(..., description="Largest generator degree")
    regularity: int
    generators: Dict[int, int] = Field(default_factory=dict, description="nu_t, nonzero entries only")
    syzygies: Dict[int, int] = Field(default_factory=dict, description="b_t, nonzero entries only")
    conjectural: bool = False
    source: str = "closed-form"


def _max_rank_cokernel(F: DivisorClass, model: PointModel) -> int:
    return max(0, h0(F + DivisorClass.e(F.r, 0), model) - 3 * h0(F, model))


def s_nef_uniform(r: int, m: int, d: int, model: Optional[PointModel] = None) -> int:
    """
    S(F, e0) for a uniform class F = d*e0 - m*(e1 + ... + er).

    F must be nef, except on the nine point cubic where t = d - 3m < 0 is
    accepted as well.
    """
    if model is None:
        model = PointModel.for_points(r)
    F = DivisorClass.uniform(r, d, m)
    if r == 9:
        t = d - 3 * m
        a = model.cubic_a(m)
        if t > 0:
            return 0
        if t == 0:
            return 3 * m - 3 * a
        if t == -1:
            return a + 1
        return 0
    if not is_nef(F, model):
        raise DomainError(f"Uniform class {F} is not nef")
    if r <= 5 or m == 0:
        return 0
    if r == 7 and m % 3 == 0 and d == 8 * (m // 3) and m // 3 >= 3:
        return 7
    if r == 8:
        if m % 6 == 0 and d == 17 * (m // 6) and m // 6 >= 9:
            return 48
        if m % 6 == 1 and d == 17 * (m // 6) + 3 and m // 6 >= 6:
            return 16
    if r >= 10:
        logger.warning(f"S for uniform r={r} assumes the maximal rank conjecture")
    return _max_rank_cokernel(F, model)


def _s_of_nef_part(H: DivisorClass, model: PointModel) -> int:
    support = H.support()
    if len(support) <= 5:
        return 0
    values = {H.m[i - 1] for i in support}
    if len(values) != 1:
        raise TheoryGapError(
            f"No closed form for S of the non-uniform nef class {H}; use the oracle instead"
        )
    k = len(support)
    sub_model = model if k == H.r else PointModel.for_points(k)
    return s_nef_uniform(k, values.pop(), H.d, sub_model)


def s_general(F: DivisorClass, model: Optional[PointModel] = None) -> MuDims:
    """
    Cokernel and kernel dimensions of H^0(F) (x) H^0(e0) -> H^0(F + e0).

    S = h^0(F + e0) when F is not effective, and otherwise
    S = h^0(F + e0) - h^0(H + e0) + S(H) for the nef part H of F.
    """
    if model is None:
        model = PointModel.for_points(F.r)
    e0 = DivisorClass.e(F.r, 0)
    h = h0(F, model)
    h_plus = h0(F + e0, model)
    if h == 0:
        S = h_plus
    elif F.r == 9 and F.is_uniform() and F.m[0] >= 0 and F.d >= 3 * F.m[0]:
        S = s_nef_uniform(9, F.m[0], F.d, model)
    else:
        H = zariski_decompose(F, model).H
        S = h_plus - h0(H + e0, model) + _s_of_nef_part(H, model)
    R = S + 3 * h - h_plus
    if S < 0 or R < 0:
        raise ResolutionError(f"Negative multiplication map dimensions for {F}: S={S}, R={R}")
    logger.debug(f"mu at {F}: h0={h}, h0(F+e0)={h_plus}, S={S}, R={R}")
    return MuDims(degree=F.d, h0_F=h, h0_F_plus=h_plus, S=S, R=R)


def mu_table(Z: FatPointScheme, prof: Optional[HilbertProfile] = None) -> List[MuDims]:
    """MuDims for alpha - 1 <= t <= tau + 1."""
    if prof is None:
        prof = profile(Z)
    return [s_general(Z.divisor(t), Z.model) for t in range(max(prof.alpha - 1, 0), prof.tau + 2)]


def syzygies_from_balance(generators: Dict[int, int], dims: Dict[int, int], low: int, high: int) -> Dict[int, int]:
    """
    Degrees and ranks of F_1 from dim F_0(t) - dim F_1(t) = dim I_t.

    dims must cover every degree in [low, high]; generators vanish below low.
    """
    syzygies: Dict[int, int] = {}
    for t in range(low, high + 1):
        free = sum(n * comb(t - s + 2, 2) for s, n in generators.items() if s <= t)
        free -= sum(b * comb(t - s + 2, 2) for s, b in syzygies.items())
        b_t = free - dims[t]
        if b_t < 0:
            raise ResolutionError(f"Negative syzygy count {b_t} in degree {t}")
        if b_t:
            syzygies[t] = b_t
    return syzygies


def betti_table(Z: FatPointScheme, prof: Optional[HilbertProfile] = None) -> BettiTable:
    """Graded ranks of the two free modules in the minimal resolution of I(Z)."""
    if prof is None:
        prof = profile(Z)
    alpha, tau = prof.alpha, prof.tau
    generators: Dict[int, int] = {alpha: h0(Z.divisor(alpha), Z.model)}
    for mu in mu_table(Z, prof):
        if alpha <= mu.degree <= tau and mu.S:
            generators[mu.degree + 1] = mu.S
    high = tau + SYZYGY_SCAN
    dims = {t: h0(Z.divisor(t), Z.model) for t in range(alpha, high + 1)}
    syzygies = syzygies_from_balance(generators, dims, alpha, high)
    return assemble_betti(Z, prof, generators, syzygies, source="closed-form")


def assemble_betti(
    Z: FatPointScheme,
    prof: HilbertProfile,
    generators: Dict[int, int],
    syzygies: Dict[int, int],
    source: str,
) -> BettiTable:
    tail = {t: b for t, b in syzygies.items() if t > prof.tau + 2}
    if tail:
        raise ResolutionError(f"Syzygies above degree tau + 2 = {prof.tau + 2}: {tail}")
    if sum(syzygies.values()) != sum(generators.values()) - 1:
        raise ResolutionError(
            f"Rank mismatch: {sum(generators.values())} generators, {sum(syzygies.values())} syzygies"
        )
    table = BettiTable(
        r=Z.r,
        multiplicities=list(Z.multiplicities),
        order=Z.model.order,
        alpha=prof.alpha,
        beta=prof.beta,
        tau=prof.tau,
        omega=max(generators),
        regularity=prof.regularity,
        generators=generators,
        syzygies=syzygies,
        conjectural=Z.conjectural,
        source=source,
    )
    logger.debug(f"Betti table of {Z.multiplicities}: generators={generators}, syzygies={syzygies}")
    return table
