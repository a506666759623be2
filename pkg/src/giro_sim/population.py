"""Heterogeneous inhabitants, the median voter, and a brute-force check on it.

Inhabitants differ from the average along two axes: extra risky earnings
``theta_j`` (a positive value marks a transfer recipient) and extra bond
holdings ``b_j`` (a negative value marks someone who gains from
monetization). Deviations are relative to the average inhabitant, so both
must average to zero across a population.

The political outcome tracks the inhabitant with the median bond
deviation. Because budget-constrained welfare is concave in the
monetization share and each inhabitant adds only terms linear in it,
every inhabitant's preference over monetization is single-peaked, and the
median voter's favorite grid point must win a full pairwise-majority
tournament. ``condorcet_delta`` runs that tournament by brute force,
without using the shortcut, so the two routes check each other.
"""

from __future__ import annotations

import csv
import functools
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import policy
from .errors import (
    DomainError,
    EmptyPopulation,
    Infeasible,
    NoCondorcetWinner,
    ParseError,
    ValidationError,
)

#: How far from zero the population means may stray.
MEAN_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Inhabitant:
    """Deviations of one inhabitant from the average (signed)."""

    theta_j: float
    b_j: float


@dataclass(frozen=True)
class Population:
    """Explicit list of inhabitants with mean-zero deviations."""

    members: tuple[Inhabitant, ...]
    description: str = ""

    def __post_init__(self):
        if not self.members:
            raise EmptyPopulation("a population needs at least one member")
        n = len(self.members)
        mean_theta = sum(m.theta_j for m in self.members) / n
        mean_b = sum(m.b_j for m in self.members) / n
        if abs(mean_theta) > MEAN_ZERO_TOL or abs(mean_b) > MEAN_ZERO_TOL:
            raise ValidationError(
                f"deviations must average to zero (mean theta_j = {mean_theta:g}, "
                f"mean b_j = {mean_b:g}); subtract the column means to normalize"
            )

    def __len__(self) -> int:
        return len(self.members)


def median_inhabitant(pop: Population) -> Inhabitant:
    """Member with the median bond deviation; even sizes take the lower median."""
    ranked = sorted(pop.members, key=lambda m: m.b_j)
    return ranked[(len(ranked) - 1) // 2]


def subsidized_majority(pop: Population) -> bool:
    """Whether transfer recipients form a majority (median theta_j > 0)."""
    ranked = sorted(pop.members, key=lambda m: m.theta_j)
    return ranked[(len(ranked) - 1) // 2].theta_j > 0.0


class PreferenceClass(Enum):
    """Quadrant of (transfer recipient?, monetization winner?)."""

    SUBSIDIZED_MONETIZATION_PRONE = "subsidized monetization-prone"
    SUBSIDIZED_BOND_HOLDER = "subsidized bond holder"
    UNSUBSIDIZED_MONETIZATION_PRONE = "unsubsidized monetization-prone"
    UNSUBSIDIZED_BOND_HOLDER = "unsubsidized bond holder"
    AVERAGE = "average"

    @property
    def ambiguous(self) -> bool:
        """True when gains on one axis trade off against losses on the other."""
        return self in (
            PreferenceClass.SUBSIDIZED_BOND_HOLDER,
            PreferenceClass.UNSUBSIDIZED_MONETIZATION_PRONE,
        )


def classify(inhabitant: Inhabitant, beta: float, params) -> PreferenceClass:
    """Place an inhabitant in the money-financed-stimulus preference map.

    Signs alone decide: theta_j > 0 marks a transfer recipient, b_j < 0 a
    monetization winner. Recipients who are also bond holders (and the
    mirror case) have no clear-cut net benefit and are flagged ambiguous.
    """
    if beta <= 0.0:
        raise DomainError("classification needs a positive transfer share")
    if inhabitant.theta_j == 0.0 and inhabitant.b_j == 0.0:
        return PreferenceClass.AVERAGE
    subsidized = inhabitant.theta_j > 0.0
    prone = inhabitant.b_j < 0.0
    if subsidized:
        return (
            PreferenceClass.SUBSIDIZED_MONETIZATION_PRONE
            if prone
            else PreferenceClass.SUBSIDIZED_BOND_HOLDER
        )
    return (
        PreferenceClass.UNSUBSIDIZED_MONETIZATION_PRONE
        if prone
        else PreferenceClass.UNSUBSIDIZED_BOND_HOLDER
    )


@functools.lru_cache(maxsize=64)
def _social_welfare_grid(
    beta: float, params: policy.ModelParams, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """(grid, v) arrays of budget-constrained welfare; infeasible cells are NaN."""
    grid = np.linspace(0.0, 1.0, steps + 1)
    values = np.empty_like(grid)
    for k, delta in enumerate(grid):
        try:
            breakdown, _ = policy.welfare_budget_constrained(beta, float(delta), params)
            values[k] = breakdown.v
        except Infeasible:
            values[k] = np.nan
    return grid, values


def _member_welfare_matrix(
    members: tuple[Inhabitant, ...],
    beta: float,
    params: policy.ModelParams,
    grid_step: float,
) -> tuple[np.ndarray, np.ndarray]:
    """(grid, W) where W[j, k] is member j's welfare at grid monetization k."""
    if grid_step <= 0.0 or grid_step > 1.0:
        raise DomainError(f"grid step must lie in (0, 1], got {grid_step}")
    if beta <= 0.0:
        raise DomainError("the vote is over monetization of a positive transfer")
    grid, base = _social_welfare_grid(beta, params, round(1.0 / grid_step))
    feasible = ~np.isnan(base)
    if not feasible.any():
        raise Infeasible(f"no feasible monetization share at beta = {beta}")
    grid = grid[feasible]
    base = base[feasible]
    theta = np.array([m.theta_j for m in members])
    b = np.array([m.b_j for m in members])
    W = (
        base[None, :]
        + beta * theta[:, None]
        + b[:, None] * params.theta_bar * params.i * (1.0 - grid[None, :])
    )
    return grid, W


def preferred_grid_delta(
    inhabitant: Inhabitant,
    beta: float,
    params: policy.ModelParams,
    grid_step: float = 0.01,
) -> float:
    """The grid monetization this inhabitant ranks first (lowest wins ties)."""
    grid, W = _member_welfare_matrix((inhabitant,), beta, params, grid_step)
    return float(grid[int(np.argmax(W[0]))])


def condorcet_delta(
    pop: Population,
    beta: float,
    params: policy.ModelParams,
    grid_step: float = 0.01,
) -> float:
    """Grid monetization that beats every other in pairwise majority votes.

    Each inhabitant votes by comparing their own welfare at the two
    candidates, with the budget tax rate recomputed for each candidate.
    Tied contests go to the lower candidate. Raises NoCondorcetWinner if
    the tournament is cyclic (it cannot be while preferences stay
    single-peaked, but the check is real).
    """
    grid, W = _member_welfare_matrix(pop.members, beta, params, grid_step)
    prefer = (W[:, :, None] > W[:, None, :]).sum(axis=0)
    margin = prefer - prefer.T
    idx = np.arange(len(grid))
    beats = (margin > 0) | ((margin == 0) & (idx[:, None] < idx[None, :]))
    np.fill_diagonal(beats, True)
    winners = np.flatnonzero(beats.all(axis=1))
    if winners.size == 0:
        raise NoCondorcetWinner("pairwise majority tournament has no winner")
    return float(grid[int(winners[0])])


def random_population(
    n: int,
    seed: int,
    theta_scale: float = 0.25,
    b_scale: float = 0.25,
) -> Population:
    """Seeded population with normal deviations, de-meaned to satisfy the invariant."""
    if n < 1:
        raise EmptyPopulation(f"population size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    theta = rng.normal(0.0, theta_scale, size=n)
    b = rng.normal(0.0, b_scale, size=n)
    theta -= theta.mean()
    b -= b.mean()
    members = tuple(
        Inhabitant(theta_j=float(t), b_j=float(deviation))
        for t, deviation in zip(theta, b)
    )
    return Population(members=members, description=f"random(n={n}, seed={seed})")


POPULATION_CSV_HEADER = ("theta_j", "b_j")


def load_population(path: str | Path) -> Population:
    """Read a ``theta_j,b_j`` CSV; rejects populations that are not mean-zero."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty population file")
        if tuple(h.strip() for h in header) != POPULATION_CSV_HEADER:
            raise ParseError(
                f"expected header 'theta_j,b_j', got {','.join(header)!r}", line=1
            )
        members = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ParseError(f"expected two columns, got {len(row)}", line=lineno)
            try:
                members.append(Inhabitant(theta_j=float(row[0]), b_j=float(row[1])))
            except ValueError:
                raise ParseError(f"bad number in {row!r}", line=lineno)
    return Population(members=tuple(members), description=str(path))


def save_population(pop: Population, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(POPULATION_CSV_HEADER)
        for member in pop.members:
            writer.writerow([repr(member.theta_j), repr(member.b_j)])
