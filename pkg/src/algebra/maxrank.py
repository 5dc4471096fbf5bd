"""
Maximal rank analysis of the multiplication maps mu_t for fat point ideals.

Per-degree classification comes from the resolution module. The bounds on
dim ker mu_t come from the two exact sequences obtained by removing a line
through one point, or by raising one multiplicity. The bounds on nu_t that
use only the Hilbert function come from restricting I(Z) to a general line.
"""
from math import comb
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.algebra.cohomology import HilbertProfile, h0, h1, profile
from src.algebra.diophantine import l1_criterion, odd_square_offset, q1_criterion
from src.algebra.resolution import MuDims, mu_table, s_general
from src.lattice.cones import ETA, ceil_fraction, fixed_part, uniform_abnormal_class, uniform_alpha_degree
from src.lattice.core import DivisorClass
from src.lattice.models import FatPointScheme, PointModel
from src.utils.logging_config import get_logger
from src.utils.validation import DomainError, ResolutionError, validate_point_count

logger = get_logger(__name__)

INJECTIVE = "injective"
SURJECTIVE = "surjective"
BIJECTIVE = "bijective"
FAILS = "FAILS"

FORCED = "forced"
INTRINSIC = "intrinsic"

# b is searched up to this bound in abnormal_witness
WITNESS_SEARCH_LIMIT = 64


class DegreeStatus(BaseModel):
    degree: int
    R: int = Field(..., description="dim ker mu_t")
    S: int = Field(..., description="dim coker mu_t")
    status: str
    label: Optional[str] = Field(None, description="forced (t < beta) or intrinsic, for failures only")


class MaxRankReport(BaseModel):
    r: int
    multiplicities: List[int]
    order: Optional[int] = None
    alpha: int
    beta: int
    tau: int
    per_degree: Dict[int, DegreeStatus] = Field(default_factory=dict)
    has_mrp: bool
    first_failure: Optional[int] = None
    conjectural: bool = False

    @property
    def failures(self) -> List[DegreeStatus]:
        return [entry for entry in self.per_degree.values() if entry.status == FAILS]


class UmrpFailure(BaseModel):
    m: int
    degree: int
    R: int
    S: int
    label: str
    alpha_equals_beta: bool


class UmrpSummary(BaseModel):
    r: int
    m_max: int
    order: Optional[int] = None
    failures: List[UmrpFailure] = Field(default_factory=list)
    failing_m: List[int] = Field(default_factory=list)
    beta_failures: List[int] = Field(default_factory=list, description="m failing at degree beta")
    alpha_equals_beta_failures: List[int] = Field(default_factory=list)
    umrp_holds: bool
    rumrp_holds: bool = Field(..., description="No failure at degree beta")
    conjectural: bool = False


class AbnormalWitness(BaseModel):
    r: int
    abnormal_class: Dict[str, object]
    a: int
    b: int
    n: int = Field(..., description="Degree where mu fails")
    m: int = Field(..., description="Uniform multiplicity")
    R: int
    S: int
    confirmed: bool


class CampanellaBounds(BaseModel):
    F: Dict[str, object]
    i: int
    h: int
    l_i: int
    q_i: int
    lower: int
    upper: int
    kernel_if_max_rank: Optional[int] = None
    exact: bool = False


class ConjecturalBounds(BaseModel):
    r: int
    m: int
    alpha: int
    h: int
    l1: int
    q1: int
    lower: int
    upper: int
    forced: bool
    reason: Optional[str] = None
    conjectural: bool = True


class ForcingScan(BaseModel):
    r: int
    m_max: int
    forced: List[int] = Field(default_factory=list)
    count: int
    fraction: float
    odd_square_offset: Optional[int] = None
    conjectural: bool = True


def _status(mu: MuDims) -> str:
    if mu.R == 0 and mu.S == 0:
        return BIJECTIVE
    if mu.R == 0:
        return INJECTIVE
    if mu.S == 0:
        return SURJECTIVE
    return FAILS


def classify(Z: FatPointScheme, prof: Optional[HilbertProfile] = None) -> MaxRankReport:
    """Status of mu_t for alpha <= t <= tau + 1; mu_t is surjective beyond."""
    if prof is None:
        prof = profile(Z)
    per_degree: Dict[int, DegreeStatus] = {}
    for mu in mu_table(Z, prof):
        t = mu.degree
        if t < prof.alpha:
            continue
        status = _status(mu)
        label = None
        if status == FAILS:
            label = FORCED if t < prof.beta else INTRINSIC
        per_degree[t] = DegreeStatus(degree=t, R=mu.R, S=mu.S, status=status, label=label)
    failing = [t for t, entry in per_degree.items() if entry.status == FAILS]
    if failing:
        logger.debug(f"mu fails to have maximal rank for {Z.multiplicities} in degrees {failing}")
    return MaxRankReport(
        r=Z.r,
        multiplicities=list(Z.multiplicities),
        order=Z.model.order,
        alpha=prof.alpha,
        beta=prof.beta,
        tau=prof.tau,
        per_degree=per_degree,
        has_mrp=not failing,
        first_failure=min(failing) if failing else None,
        conjectural=Z.conjectural,
    )


def classify_uniform(r: int, m: int, order: Optional[int] = None) -> MaxRankReport:
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    return classify(FatPointScheme.uniform(r, m, order))


def umrp_status(r: int, m_max: int, order: Optional[int] = None) -> UmrpSummary:
    """Scan uniform multiplicities 1..m_max on r points for failures of maximal rank."""
    validate_point_count(r)
    if m_max < 1:
        raise DomainError(f"m_max must be positive, got {m_max}")
    failures: List[UmrpFailure] = []
    beta_failures: List[int] = []
    equal_failures: List[int] = []
    conjectural = False
    for m in range(1, m_max + 1):
        report = classify_uniform(r, m, order)
        conjectural = conjectural or report.conjectural
        same = report.alpha == report.beta
        for entry in report.failures:
            failures.append(
                UmrpFailure(m=m, degree=entry.degree, R=entry.R, S=entry.S, label=entry.label or FORCED,
                            alpha_equals_beta=same)
            )
            if entry.degree == report.beta:
                beta_failures.append(m)
                if same:
                    equal_failures.append(m)
    failing_m = sorted({f.m for f in failures})
    logger.info(f"Uniform scan r={r}, m<={m_max}: {len(failing_m)} multiplicities fail")
    return UmrpSummary(
        r=r,
        m_max=m_max,
        order=order if r == 9 else None,
        failures=failures,
        failing_m=failing_m,
        beta_failures=beta_failures,
        alpha_equals_beta_failures=equal_failures,
        umrp_holds=not failures,
        rumrp_holds=not beta_failures,
        conjectural=conjectural,
    )


def abnormal_witness(r: int) -> Optional[AbnormalWitness]:
    """
    A degree n and uniform multiplicity m where mu_n fails, built from the
    uniform abnormal class E = dE*e0 - mE*sum e_i.

    For b = 1, 2, ... take a = ceil(eta*b*mE) - 1 - b*dE; the first b with
    a >= 1 gives a*e0 + bE with a fixed part and (a+1)*e0 + bE nef.
    """
    validate_point_count(r)
    E = uniform_abnormal_class(r)
    if E is None:
        return None
    dE, mE = E.d, E.m[0]
    for b in range(1, WITNESS_SEARCH_LIMIT + 1):
        a = ceil_fraction(ETA[r] * b * mE) - 1 - b * dE
        if a < 1:
            continue
        n, m = a + b * dE, b * mE
        mu = s_general(DivisorClass.uniform(r, n, m), PointModel.for_points(r))
        confirmed = mu.R > 0 and mu.S > 0
        if not confirmed:
            logger.warning(f"Abnormal witness ({n}, {m}) on r={r} points has maximal rank")
        return AbnormalWitness(
            r=r, abnormal_class=E.to_json(), a=a, b=b, n=n, m=m, R=mu.R, S=mu.S, confirmed=confirmed
        )
    raise ResolutionError(f"No witness found for r={r} with b <= {WITNESS_SEARCH_LIMIT}")


def campanella_bounds(F: DivisorClass, i: int, model: Optional[PointModel] = None) -> CampanellaBounds:
    """
    Bounds on dim ker of H^0(F) (x) H^0(e0) -> H^0(F + e0) using point i.

    lower = max(l_i, 3h - h^0(F + e0)) and upper = l_i + q_i, where
    l_i = h^0(F - e0 + e_i) and q_i = h^0(F - e_i).
    """
    if model is None:
        model = PointModel.for_points(F.r)
    if not 1 <= i <= F.r:
        raise DomainError(f"Point index {i} out of range 1..{F.r}")
    if any(a <= 0 for a in F.m):
        raise DomainError(f"All multiplicities of {F} must be positive")
    h = h0(F, model)
    if h == 0:
        raise DomainError(f"Class {F} is not effective")
    e0, ei = DivisorClass.e(F.r, 0), DivisorClass.e(F.r, i)
    l_i = h0(F - e0 + ei, model)
    q_i = h0(F - ei, model)
    lower = max(l_i, 3 * h - h0(F + e0, model))
    upper = l_i + q_i
    kernel = None
    exact = False
    if h1(F, model) == 0:
        kernel = max(0, 2 * h - F.d - 2)
        # l_i + q_i = 2h - d - 2 once both neighbours are special-free
        exact = h1(F - e0 + ei, model) == 0 and h1(F - ei, model) == 0
        if exact and not lower == upper == kernel:
            raise ResolutionError(f"Bounds [{lower}, {upper}] at {F} do not pin dim ker = {kernel}")
    return CampanellaBounds(
        F=F.to_json(), i=i, h=h, l_i=l_i, q_i=q_i, lower=lower, upper=upper,
        kernel_if_max_rank=kernel, exact=exact,
    )


def _kernel_interval(F: DivisorClass, model: PointModel) -> Tuple[int, int]:
    support = F.support()
    sub = F.restricted(support)
    sub_model = model if len(support) == F.r else PointModel.for_points(len(support))
    low, high = 0, None
    for i in range(1, sub.r + 1):
        bounds = campanella_bounds(sub, i, sub_model)
        low = max(low, bounds.lower)
        high = bounds.upper if high is None else min(high, bounds.upper)
    if high is None or low > high:
        raise ResolutionError(f"Empty kernel interval for {F}: [{low}, {high}]")
    return low, high


def kernel_generator_bounds(Z: FatPointScheme, prof: Optional[HilbertProfile] = None) -> Dict[int, List[int]]:
    """
    Interval for each nu_t, alpha <= t <= tau + 1, from the per-point kernel
    bounds of campanella_bounds and nu_{t+1} = h^0(F_{t+1}) - 3h^0(F_t) + dim ker mu_t.
    """
    if prof is None:
        prof = profile(Z)
    alpha = prof.alpha
    bounds: Dict[int, List[int]] = {alpha: [h0(Z.divisor(alpha), Z.model)] * 2}
    for t in range(alpha, prof.tau + 1):
        low, high = _kernel_interval(Z.divisor(t), Z.model)
        shift = h0(Z.divisor(t + 1), Z.model) - 3 * h0(Z.divisor(t), Z.model)
        bounds[t + 1] = [max(0, shift + low), shift + high]
    return bounds


def _fixed_curve_degree(F: DivisorClass, model: PointModel) -> int:
    return fixed_part(F, model).N.d


def generator_bounds(Z: FatPointScheme, prof: Optional[HilbertProfile] = None) -> Dict[int, List[int]]:
    """
    Interval for each nu_t, alpha <= t <= tau + 1, from the Hilbert function alone.

    With H(t) = dim (R/I)_t, restricting to a general line gives
    max(0, -D^3 H(t)) <= nu_t <= -D^2 H(t), D the backward difference, and
    nu_alpha = dim I_alpha. In degree tau + 1 the upper bound drops by one
    unless the forms of degree tau share a factor of degree D H(tau), which
    is read off the fixed part of F_tau.
    """
    if prof is None:
        prof = profile(Z)
    alpha, tau = prof.alpha, prof.tau

    def quotient(t: int) -> int:
        dim = h0(Z.divisor(t), Z.model) if t >= alpha else 0
        return comb(t + 2, 2) - dim

    def diff(t: int, order: int) -> int:
        return sum((-1) ** k * comb(order, k) * quotient(t - k) for k in range(order + 1))

    bounds: Dict[int, List[int]] = {alpha: [h0(Z.divisor(alpha), Z.model)] * 2}
    for t in range(alpha + 1, tau + 2):
        upper = -diff(t, 2)
        if t == tau + 1 and _fixed_curve_degree(Z.divisor(tau), Z.model) != diff(tau, 1):
            upper -= 1
        lower = max(0, -diff(t, 3))
        if lower > upper:
            raise ResolutionError(f"Empty generator interval in degree {t} for {Z.multiplicities}: [{lower}, {upper}]")
        bounds[t] = [lower, upper]
    logger.debug(f"Generator bounds for {Z.multiplicities}: {bounds}")
    return bounds


def conjectural_uniform_bounds(r: int, m: int) -> ConjecturalBounds:
    """
    Kernel bounds for mu_alpha on r >= 10 points, assuming the classes involved
    have the expected dimension.
    """
    if r < 10:
        raise DomainError(f"Conjectural bounds apply to r >= 10, got r={r}")
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    alpha = uniform_alpha_degree(r, m)
    h = comb(alpha + 2, 2) - r * comb(m + 1, 2)
    l1 = max(0, h - alpha + m - 1)
    q1 = max(0, h - m - 1)
    lower = max(l1, 2 * h - alpha - 2, 0)
    upper = l1 + q1
    # h <= alpha + 1 always, so the criteria reduce to q1 == 0 and l1 > 0
    reason = None
    if h == 1:
        reason = "h = 1"
    elif q1_criterion(r, m, alpha):
        reason = "q1 = 0"
    elif l1_criterion(r, m, alpha + 1):
        reason = "l1 > 0"
    if lower > upper:
        raise ResolutionError(f"Inconsistent bounds for r={r}, m={m}: [{lower}, {upper}]")
    return ConjecturalBounds(
        r=r, m=m, alpha=alpha, h=h, l1=l1, q1=q1, lower=lower, upper=upper,
        forced=reason is not None, reason=reason,
    )


def forcing_scan(r: int, m_max: int) -> ForcingScan:
    """Multiplicities m <= m_max where the bounds force mu_alpha to have maximal rank."""
    if m_max < 1:
        raise DomainError(f"m_max must be positive, got {m_max}")
    forced = [m for m in range(1, m_max + 1) if conjectural_uniform_bounds(r, m).forced]
    logger.info(f"Forcing scan r={r}: {len(forced)} of {m_max} multiplicities forced")
    return ForcingScan(
        r=r,
        m_max=m_max,
        forced=forced,
        count=len(forced),
        fraction=len(forced) / m_max,
        odd_square_offset=odd_square_offset(r),
    )


def _check_nine(m: List[int]) -> None:
    if len(m) != 9:
        raise DomainError(f"Expected 9 multiplicities, got {len(m)}")
    if any(a < 0 for a in m):
        raise DomainError(f"Multiplicities must be nonnegative: {m}")
    if list(m) != sorted(m, reverse=True):
        raise DomainError(f"Multiplicities must be sorted in descending order: {m}")


def nine_point_criterion(m: List[int]) -> bool:
    """Sufficient condition for maximal rank on nine general points."""
    _check_nine(m)
    if m[0] == m[8]:
        return True
    return m[8] >= 20 * (m[0] - m[8] + 1) ** 2 and sum(m) % 3 != 2


def nine_point_alpha(m: List[int]) -> int:
    """floor(1 + sum(m)/3)."""
    _check_nine(m)
    return 1 + sum(m) // 3
