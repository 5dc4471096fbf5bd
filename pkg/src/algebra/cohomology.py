"""
Cohomology of classes on the blow-up and Hilbert functions of fat point ideals.

dim I(Z)_d is h^0 of F_d = d*e0 - sum m_i*e_i, computed by reducing F_d to the
fundamental chamber, where Riemann-Roch applies (with the -sK corner of the
nine point cubic model).
"""
from functools import lru_cache
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.lattice.core import DivisorClass, chamber_reduce, chi
from src.lattice.cones import is_anticanonical_multiple, fixed_part, uniform_alpha_degree
from src.lattice.models import FatPointScheme, PointKind, PointModel
from src.utils.logging_config import get_logger
from src.utils.validation import DomainError, ResolutionError, UnsupportedError

logger = get_logger(__name__)

__all__ = [
    'HilbertProfile',
    'chi',
    'h0',
    'h1',
    'gcd_free',
    'hilbert_function',
    'alpha_degree',
    'tau_degree',
    'beta_degree',
    'profile',
]


class HilbertProfile(BaseModel):
    """Initial degree, generator degree bound and Hilbert function of I(Z)."""
    r: int = Field(..., description="Number of points")
    multiplicities: List[int]
    order: Optional[int] = Field(None, description="Order l of -K on the cubic (r = 9); None is infinite")
    alpha: int = Field(..., description="Least degree of a nonzero form in I(Z)")
    beta: int = Field(..., description="Least degree whose forms have no common factor")
    tau: int = Field(..., description="Least t >= alpha - 1 with h^1(F_t) = 0")
    regularity: int
    values: Dict[int, int] = Field(default_factory=dict, description="dim I(Z)_d for alpha-1 <= d <= tau+2")
    conjectural: bool = False


def _model(F: DivisorClass, model: Optional[PointModel]) -> PointModel:
    if model is None:
        return PointModel.for_points(F.r)
    model.check(F.r)
    return model


@lru_cache(maxsize=65536)
def _h0(F: DivisorClass, model: PointModel) -> int:
    out = chamber_reduce(F).output
    if out.d < 0:
        return 0
    if model.kind is PointKind.CUBIC and is_anticanonical_multiple(out):
        return model.cubic_a(out.m[0]) + 1
    value = chi(out)
    if model.kind is PointKind.CONJECTURAL:
        return max(0, value)
    return value


def h0(F: DivisorClass, model: Optional[PointModel] = None) -> int:
    """
    Dimension of the space of sections of F.

    Exact for r <= 9 under the point model; for r >= 10 this is max(0, chi)
    of the chamber class, which is conjectural.
    """
    return _h0(F, _model(F, model))


def h1(F: DivisorClass, model: Optional[PointModel] = None) -> int:
    """h^0 - chi, valid while h^2 vanishes (F.e0 >= -2)."""
    if F.d < -2:
        raise UnsupportedError(f"h^2 may not vanish for {F} (degree below -2)")
    value = h0(F, model) - chi(F)
    if value < 0:
        raise ResolutionError(f"Negative h^1 for {F}: h0={h0(F, model)}, chi={chi(F)}")
    return value


def gcd_free(F: DivisorClass, model: Optional[PointModel] = None) -> bool:
    """True when the forms of |F| have no common plane curve as a factor."""
    model = _model(F, model)
    if F.d == 0 and not any(F.m):
        return True
    if h0(F, model) < 2:
        return False
    return all(c.d == 0 for c, _ in fixed_part(F, model).parts)


def hilbert_function(Z: FatPointScheme, d: int) -> int:
    """dim I(Z)_d."""
    if d < 0:
        raise DomainError(f"Degree must be nonnegative, got {d}")
    return h0(Z.divisor(d), Z.model)


def alpha_degree(Z: FatPointScheme) -> int:
    """Least d with I(Z)_d != 0."""
    if Z.is_uniform and Z.r <= 9:
        return uniform_alpha_degree(Z.r, Z.multiplicities[0], Z.model)
    # no nonzero form of degree d vanishes to order > d, and h^0 is nondecreasing in d
    low = max(Z.multiplicities)
    high = max(low, 1)
    while hilbert_function(Z, high) == 0:
        high *= 2
    while low < high:
        mid = (low + high) // 2
        if hilbert_function(Z, mid) > 0:
            high = mid
        else:
            low = mid + 1
    return low


def tau_degree(Z: FatPointScheme, alpha: Optional[int] = None) -> int:
    """Least t >= alpha - 1 with h^1(F_t) = 0; h^1 is nonincreasing in t."""
    if alpha is None:
        alpha = alpha_degree(Z)
    low = alpha - 1
    high = max(alpha, 1)
    while h1(Z.divisor(high), Z.model) > 0:
        high = 2 * high + 1
    while low < high:
        mid = (low + high) // 2
        if h1(Z.divisor(mid), Z.model) == 0:
            high = mid
        else:
            low = mid + 1
    return low


def beta_degree(Z: FatPointScheme, alpha: Optional[int] = None, tau: Optional[int] = None) -> int:
    """Least d whose forms have trivial gcd; never exceeds tau + 1."""
    if alpha is None:
        alpha = alpha_degree(Z)
    if tau is None:
        tau = tau_degree(Z, alpha)
    for d in range(alpha, tau + 2):
        if gcd_free(Z.divisor(d), Z.model):
            return d
    raise ResolutionError(f"No gcd-free degree in [{alpha}, {tau + 1}] for {Z.multiplicities}")


def profile(Z: FatPointScheme) -> HilbertProfile:
    """Compute alpha, beta, tau and dim I(Z)_d for alpha-1 <= d <= tau+2."""
    if Z.conjectural:
        logger.warning(f"Hilbert function for r={Z.r} relies on the conjectural chamber formula")
    alpha = alpha_degree(Z)
    tau = tau_degree(Z, alpha)
    beta = beta_degree(Z, alpha, tau)
    values = {d: hilbert_function(Z, d) for d in range(max(alpha - 1, 0), tau + 3)}
    logger.debug(f"Profile of {Z.multiplicities}: alpha={alpha}, beta={beta}, tau={tau}")
    return HilbertProfile(
        r=Z.r,
        multiplicities=list(Z.multiplicities),
        order=Z.model.order,
        alpha=alpha,
        beta=beta,
        tau=tau,
        regularity=tau + 1,
        values=values,
        conjectural=Z.conjectural,
    )
