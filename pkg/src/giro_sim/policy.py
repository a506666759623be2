"""Welfare model of pandemic-era fiscal transfers and their monetization.

A single policymaker chooses a transfer share beta (fraction of pandemic
income losses covered), a monetization share delta (fraction of the
transfer financed by money issue rather than funded debt), and a tax rate
tau that services the debt. Social welfare is

    v = u - f - m

where u is the average inhabitant's utility, f the pandemic externality
(cost of under-supporting the economy) and m the monetary externality
(cost of monetary instability). Functional forms:

    labor supply        l(tau) = (1 - tau)**eta
    effort cost         e(l)   = l**(1 + 1/eta) / (1 + 1/eta)
    utility             u = l(1-tau) - e(l) + p*beta*theta*(1+i*(1-delta))
                            + (1-p)*theta
    budget              tau * l(tau) = beta*theta*(1+i*(1-delta))
    pandemic cost       f = (eps/2) * ((1-beta)*theta)**2
    monetary cost       m = (phi/2) * delta**2 * beta * theta

The closed-form benchmark for optimal monetization is

    delta_star = eta/(1-eta) * i/phi

which does not coincide exactly with the numeric argmax under the forms
above (the first-order condition carries eta*tau/(1-tau*(1+eta)) where
the benchmark carries eta/(1-eta); the two agree at tau = 1/2). Both are
exposed side by side, and only their comparative statics are expected to
match. Individual inhabitants deviate from the average through extra
risky earnings theta_j (transfer recipients) and extra bond holdings b_j
(monetization losers), giving each a preferred monetization

    delta_j = delta_star - (b_j/beta) * (i/phi)

whose gap to delta_star is the political distortion that, scaled by the
pressure weight chi, yields the politically chosen monetization.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import DomainError, Infeasible, NoFeasiblePolicy, ParseError, ValidationError

#: Bisection stops once the bracket is this narrow.
_BISECTION_WIDTH = 1e-15

#: Revenue shortfalls larger than this are treated as solver failures.
BUDGET_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Structural parameters of the welfare model.

    eta        labor-supply elasticity, strictly inside (0, 1)
    i          interest rate on funded debt, >= 0
    phi        monetary-externality aversion, > 0
    eps        pandemic-externality aversion, >= 0
    chi        political-pressure weight, in [0, 1]
    p          pandemic probability, in [0, 1]
    theta_bar  average risky earnings, normalized to 1
    """

    eta: float
    i: float
    phi: float
    eps: float = 0.0
    chi: float = 0.0
    p: float = 1.0
    theta_bar: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise DomainError(f"eta must lie strictly inside (0, 1), got {self.eta}")
        if self.i < 0.0:
            raise DomainError(f"interest rate must be >= 0, got {self.i}")
        if self.phi <= 0.0:
            raise DomainError(f"phi must be > 0, got {self.phi}")
        if self.eps < 0.0:
            raise DomainError(f"eps must be >= 0, got {self.eps}")
        if not 0.0 <= self.chi <= 1.0:
            raise DomainError(f"chi must lie in [0, 1], got {self.chi}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if self.theta_bar <= 0.0:
            raise DomainError(f"theta_bar must be > 0, got {self.theta_bar}")


@dataclass(frozen=True)
class PolicyChoice:
    """A (tau, beta, delta) triple: tax rate, transfer share, monetization share."""

    tau: float
    beta: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.tau < 1.0:
            raise DomainError(f"tau must lie in [0, 1), got {self.tau}")
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 <= self.delta <= 1.0:
            raise DomainError(f"delta must lie in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class WelfareBreakdown:
    """Welfare components; ``v`` is always computed as u - f - m."""

    u: float
    f: float
    m: float
    v: float = math.nan

    def __post_init__(self):
        object.__setattr__(self, "v", self.u - self.f - self.m)


@dataclass(frozen=True)
class ClampedValue:
    """A formula value clamped into [0, 1], with the raw value kept around."""

    value: float
    unclamped: float


def _clamp01(x: float) -> ClampedValue:
    return ClampedValue(value=min(1.0, max(0.0, x)), unclamped=x)


def labor_supply(tau: float, params: ModelParams) -> float:
    """Hours supplied at tax rate tau: (1 - tau)**eta, decreasing in tau."""
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"tau must lie in [0, 1), got {tau}")
    return (1.0 - tau) ** params.eta


def effort_disutility(labor: float, params: ModelParams) -> float:
    """Convex effort cost l**(1+1/eta)/(1+1/eta) behind the labor-supply curve."""
    exponent = 1.0 + 1.0 / params.eta
    return labor**exponent / exponent


def inhabitant_utility(policy: PolicyChoice, params: ModelParams) -> float:
    """Average inhabitant's expected utility under a policy.

    Safe income is earned at the optimal effort for the given tax rate.
    Risky earnings are lost in the pandemic state (probability p) and
    replaced by the transfer plus the bond income it carries.
    """
    labor = labor_supply(policy.tau, params)
    safe = labor * (1.0 - policy.tau) - effort_disutility(labor, params)
    pandemic_income = (
        policy.beta * params.theta_bar * (1.0 + params.i * (1.0 - policy.delta))
    )
    return safe + params.p * pandemic_income + (1.0 - params.p) * params.theta_bar


def consumption(policy: PolicyChoice, params: ModelParams) -> float:
    """Pandemic-state consumption: after-tax labor income plus the transfer."""
    labor = labor_supply(policy.tau, params)
    return labor * (1.0 - policy.tau) + policy.beta * params.theta_bar * (
        1.0 + params.i * (1.0 - policy.delta)
    )


def laffer_peak(params: ModelParams) -> tuple[float, float]:
    """(tax rate, revenue) at the top of the revenue curve tau*(1-tau)**eta."""
    tau_peak = 1.0 / (1.0 + params.eta)
    return tau_peak, tau_peak * (1.0 - tau_peak) ** params.eta


def required_revenue(beta: float, delta: float, params: ModelParams) -> float:
    """Debt service the budget must cover: beta*theta*(1 + i*(1 - delta))."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta}")
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    return beta * params.theta_bar * (1.0 + params.i * (1.0 - delta))


def budget_tau(beta: float, delta: float, params: ModelParams) -> float:
    """Smallest tax rate balancing the budget, by bisection.

    Solves tau * (1-tau)**eta = beta*theta*(1 + i*(1-delta)) on the
    upward slope of the revenue curve. Raises Infeasible when the
    requirement exceeds the revenue peak.
    """
    revenue = required_revenue(beta, delta, params)
    if revenue == 0.0:
        return 0.0
    tau_peak, revenue_max = laffer_peak(params)
    if revenue > revenue_max:
        raise Infeasible(
            f"required revenue {revenue:.6f} exceeds the revenue peak "
            f"{revenue_max:.6f} (at tau = {tau_peak:.6f})"
        )
    lo, hi = 0.0, tau_peak
    while hi - lo > _BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid * (1.0 - mid) ** params.eta < revenue:
            lo = mid
        else:
            hi = mid
    tau = 0.5 * (lo + hi)
    residual = abs(tau * (1.0 - tau) ** params.eta - revenue)
    if residual >= BUDGET_RESIDUAL_TOL:
        raise Infeasible(f"bisection stalled with residual {residual:g}")
    return tau


def monetary_externality(beta: float, delta: float, params: ModelParams) -> float:
    """Cost of monetary instability, quadratic in the monetization share."""
    return 0.5 * params.phi * delta**2 * beta * params.theta_bar


def pandemic_externality(beta: float, params: ModelParams) -> float:
    """Cost of uncompensated pandemic losses, quadratic in what is not covered."""
    return 0.5 * params.eps * ((1.0 - beta) * params.theta_bar) ** 2


def welfare(policy: PolicyChoice, params: ModelParams) -> WelfareBreakdown:
    """Evaluate all welfare components at an arbitrary policy triple.

    tau is taken as given, which permits off-budget sensitivity runs; use
    :func:`welfare_budget_constrained` to tie tau to the budget.
    """
    return WelfareBreakdown(
        u=inhabitant_utility(policy, params),
        f=pandemic_externality(policy.beta, params),
        m=monetary_externality(policy.beta, policy.delta, params),
    )


def welfare_budget_constrained(
    beta: float, delta: float, params: ModelParams
) -> tuple[WelfareBreakdown, float]:
    """Welfare with tau pinned down by the budget; returns (breakdown, tau)."""
    tau = budget_tau(beta, delta, params)
    return welfare(PolicyChoice(tau=tau, beta=beta, delta=delta), params), tau


def optimal_delta_closed_form(params: ModelParams) -> ClampedValue:
    """Closed-form benchmark for optimal monetization: eta/(1-eta) * i/phi."""
    return _clamp01(params.eta / (1.0 - params.eta) * params.i / params.phi)


def _golden_section_max(
    objective: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Deterministic golden-section maximization on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi_sq = (3.0 - math.sqrt(5.0)) / 2.0
    width = hi - lo
    if width <= tol:
        mid = 0.5 * (lo + hi)
        return mid, objective(mid)
    a, b = lo, hi
    c = a + inv_phi_sq * width
    d = a + inv_phi * width
    yc = objective(c)
    yd = objective(d)
    steps = int(math.ceil(math.log(tol / width) / math.log(inv_phi)))
    for _ in range(max(steps - 1, 0)):
        if yc > yd:
            b, d, yd = d, c, yc
            width *= inv_phi
            c = a + inv_phi_sq * width
            yc = objective(c)
        else:
            a, c, yc = c, d, yd
            width *= inv_phi
            d = a + inv_phi * width
            yd = objective(d)
    return (c, yc) if yc > yd else (d, yd)


def _delta_grid(grid_step: float) -> list[float]:
    if grid_step <= 0.0 or grid_step > 1.0:
        raise DomainError(f"grid step must lie in (0, 1], got {grid_step}")
    n = round(1.0 / grid_step)
    return [k / n for k in range(n + 1)]


def optimal_delta_numeric(
    beta: float,
    params: ModelParams,
    tol: float = 1e-9,
    grid_step: float = 0.01,
) -> float:
    """Monetization share maximizing budget-constrained welfare at fixed beta.

    Grid scan at ``grid_step`` resolution followed by golden-section
    refinement around the best cell. Infeasible cells count as minus
    infinity; raises Infeasible when no cell is feasible. Ties resolve
    toward the smaller delta.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")

    def objective(delta: float) -> float:
        try:
            breakdown, _ = welfare_budget_constrained(beta, delta, params)
        except Infeasible:
            return -math.inf
        return breakdown.v

    grid = _delta_grid(grid_step)
    best_delta, best_v = grid[0], objective(grid[0])
    for delta in grid[1:]:
        v = objective(delta)
        if v > best_v:
            best_delta, best_v = delta, v
    if best_v == -math.inf:
        raise Infeasible(f"no feasible monetization share at beta = {beta}")
    lo = max(0.0, best_delta - grid_step)
    hi = min(1.0, best_delta + grid_step)
    refined, refined_v = _golden_section_max(objective, lo, hi, tol)
    return refined if refined_v > best_v else best_delta


def optimal_policy_numeric(
    params: ModelParams,
    tol: float = 1e-9,
    grid_step: float = 0.01,
    transform: Callable[[float], float] | None = None,
) -> PolicyChoice:
    """Welfare-maximizing (tau, beta, delta) with tau from the budget.

    Full grid scan over (beta, delta) followed by coordinate-wise
    golden-section refinement. Deterministic tie-break: the scan order is
    beta ascending then delta ascending and only strict improvements
    displace the incumbent, so ties resolve to the smallest beta, then
    the smallest delta. ``transform`` optionally rescales the objective
    (it must be strictly increasing, e.g. an affine map with positive
    slope); the argmax is invariant under any such rescaling.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    rescale = transform if transform is not None else lambda v: v

    def objective(beta: float, delta: float) -> float:
        try:
            breakdown, _ = welfare_budget_constrained(beta, delta, params)
        except Infeasible:
            return -math.inf
        return rescale(breakdown.v)

    grid = _delta_grid(grid_step)
    best: tuple[float, float] | None = None
    best_v = -math.inf
    for beta in grid:
        # Requirement falls with delta, so feasibility at delta=1 screens the row.
        if required_revenue(beta, 1.0, params) > laffer_peak(params)[1]:
            continue
        for delta in grid:
            v = objective(beta, delta)
            if v > best_v:
                best, best_v = (beta, delta), v
    if best is None or best_v == -math.inf:
        raise NoFeasiblePolicy("every (beta, delta) grid point is infeasible")

    beta_star, delta_star = best
    for _ in range(2):
        lo = max(0.0, delta_star - grid_step)
        hi = min(1.0, delta_star + grid_step)
        delta_ref, v_ref = _golden_section_max(
            lambda d: objective(beta_star, d), lo, hi, tol
        )
        if v_ref > best_v:
            delta_star, best_v = delta_ref, v_ref
        lo = max(0.0, beta_star - grid_step)
        hi = min(1.0, beta_star + grid_step)
        beta_ref, v_ref = _golden_section_max(
            lambda b: objective(b, delta_star), lo, hi, tol
        )
        if v_ref > best_v:
            beta_star, best_v = beta_ref, v_ref
    tau_star = budget_tau(beta_star, delta_star, params)
    return PolicyChoice(tau=tau_star, beta=beta_star, delta=delta_star)


def central_bank_resource(delta_star: float, beta: float, params: ModelParams) -> float:
    """Amount of money the issuer must create: delta* * beta * theta.

    The model leaves the issuer's implementation map unspecified; the
    monetized slice of the transfer is the natural choice and is what the
    ledger strategies take as their issue amount.
    """
    return delta_star * beta * params.theta_bar


# --- heterogeneous inhabitants ---------------------------------------------


def inhabitant_welfare(inhabitant, policy: PolicyChoice, params: ModelParams) -> float:
    """Welfare of one inhabitant: the social value plus two deviation terms.

    ``inhabitant`` is anything with ``theta_j`` (extra risky earnings)
    and ``b_j`` (extra bond holdings) attributes.
    """
    base = welfare(policy, params).v
    return (
        base
        + policy.beta * inhabitant.theta_j
        + inhabitant.b_j * params.theta_bar * params.i * (1.0 - policy.delta)
    )


def political_distortion(inhabitant, beta: float, params: ModelParams) -> float:
    """Gap between an inhabitant's preferred monetization and the optimum.

    Equals -(b_j/beta) * (i/phi): bond holders want less monetization,
    bond-short inhabitants want more. Undefined at beta = 0.
    """
    if beta == 0.0:
        raise DomainError("political distortion is undefined at beta = 0")
    return -(inhabitant.b_j / beta) * (params.i / params.phi)


def inhabitant_optimal_delta(
    inhabitant, beta: float, params: ModelParams
) -> ClampedValue:
    """Monetization preferred by one inhabitant, clamped into [0, 1].

    Computed as the closed-form optimum plus the inhabitant's political
    distortion, which keeps the three closed forms mutually consistent to
    the last bit; algebraically this is (eta/(1-eta) - b_j/beta) * i/phi.
    """
    base = optimal_delta_closed_form(params).unclamped
    return _clamp01(base + political_distortion(inhabitant, beta, params))


def actual_delta(median_inhabitant, beta: float, params: ModelParams) -> float:
    """Politically chosen monetization: chi times the median distortion size.

    Taken literally from the model: the outcome scales with the magnitude
    of the median inhabitant's distortion, not its direction.
    """
    return params.chi * abs(political_distortion(median_inhabitant, beta, params))


# --- sweeps and parameter files ----------------------------------------------

SWEEP_CSV_HEADER = (
    "eta",
    "i",
    "phi",
    "eps",
    "chi",
    "beta",
    "delta",
    "tau",
    "u",
    "f",
    "m",
    "v",
)


@dataclass(frozen=True)
class SweepRow:
    """One comparative-statics cell: parameters, delta argmax, welfare there."""

    eta: float
    i: float
    phi: float
    eps: float
    chi: float
    beta: float
    delta: float
    tau: float
    u: float
    f: float
    m: float
    v: float


def comparative_statics_sweep(
    beta: float,
    etas: Sequence[float],
    interest_rates: Sequence[float],
    phis: Sequence[float],
    base: ModelParams,
) -> list[SweepRow]:
    """Numeric delta argmax over an (eta, i, phi) grid at fixed beta.

    Rows come out in grid order (eta outermost, phi innermost), each with
    the budget tax rate and welfare breakdown at its argmax.
    """
    rows = []
    for eta in etas:
        for i in interest_rates:
            for phi in phis:
                params = ModelParams(
                    eta=eta,
                    i=i,
                    phi=phi,
                    eps=base.eps,
                    chi=base.chi,
                    p=base.p,
                    theta_bar=base.theta_bar,
                )
                delta = optimal_delta_numeric(beta, params)
                breakdown, tau = welfare_budget_constrained(beta, delta, params)
                rows.append(
                    SweepRow(
                        eta=eta,
                        i=i,
                        phi=phi,
                        eps=base.eps,
                        chi=base.chi,
                        beta=beta,
                        delta=delta,
                        tau=tau,
                        u=breakdown.u,
                        f=breakdown.f,
                        m=breakdown.m,
                        v=breakdown.v,
                    )
                )
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        writer.writerow([repr(getattr(row, name)) for name in SWEEP_CSV_HEADER])
    return buf.getvalue()


PARAM_KEYS = ("eta", "i", "phi", "eps", "chi", "p", "theta_bar")


def load_params(path: str | Path) -> ModelParams:
    """Read a ``key = value`` parameter file.

    Recognized keys: eta, i, phi, eps, chi, p, theta_bar. Blank lines and
    ``#`` comments are ignored. eta, i and phi are required; the rest
    default as in :class:`ModelParams`.
    """
    values: dict[str, float] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in PARAM_KEYS:
            raise ParseError(f"unknown parameter {key!r}", line=lineno)
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise ParseError(f"bad number for {key}: {value.strip()!r}", line=lineno)
    missing = [k for k in ("eta", "i", "phi") if k not in values]
    if missing:
        raise ValidationError(f"parameter file must define {', '.join(missing)}")
    try:
        return ModelParams(**values)
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
