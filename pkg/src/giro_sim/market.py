"""Money supply to agio mapping for bank money priced against coin.

The agio is the market premium of bank scriptural money over circulating
coin (negative once the bank money trades at a discount). The engine
needs only a monotone link from the outstanding money stock to that
premium, so the model here is a deliberately plain log-linear curve

    agio(M) = agio_ref - kappa * ln(M / m_ref)

calibrated by least squares to observed (money stock, agio) pairs; with
exactly two observations the fit is exact. This is a modeling overlay for
replay purposes, not a price-formation theory.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DegenerateFit, DomainError, ParseError


@dataclass(frozen=True)
class AgioModel:
    """Log-linear premium curve; kappa > 0 means more money, lower premium."""

    kappa: float
    m_ref: float
    agio_ref: float

    def __post_init__(self):
        if not self.m_ref > 0.0:
            raise DomainError(f"reference money stock must be > 0, got {self.m_ref}")
        if not math.isfinite(self.kappa):
            raise DomainError(f"kappa must be finite, got {self.kappa}")


@dataclass(frozen=True)
class AgioObservation:
    """One dated market reading: money stock outstanding and observed agio."""

    label: str
    money_stock: int
    agio: float

    def __post_init__(self):
        if self.money_stock <= 0:
            raise DomainError(f"money stock must be > 0, got {self.money_stock}")
        if self.agio <= -1.0:
            raise DomainError(f"agio must exceed -1, got {self.agio}")


def fit(observations: Sequence[AgioObservation]) -> AgioModel:
    """Least-squares fit of the premium curve to observations.

    The first observation's money stock becomes the reference point.
    Raises DegenerateFit unless at least two distinct money stocks are
    present.
    """
    if len(observations) < 2:
        raise DegenerateFit("need at least two observations")
    m_ref = float(observations[0].money_stock)
    xs = [math.log(obs.money_stock / m_ref) for obs in observations]
    ys = [obs.agio for obs in observations]
    n = len(xs)
    x_mean = sum(xs) / n
    y_mean = sum(ys) / n
    sxx = sum((x - x_mean) ** 2 for x in xs)
    if sxx == 0.0:
        raise DegenerateFit("all observations share one money stock")
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return AgioModel(kappa=-slope, m_ref=m_ref, agio_ref=y_mean - slope * x_mean)


def predict(model: AgioModel, money_stock: float) -> float:
    """Premium implied by the curve at a given money stock."""
    if money_stock <= 0.0:
        raise DomainError(f"money stock must be > 0, got {money_stock}")
    return model.agio_ref - model.kappa * math.log(money_stock / model.m_ref)


def residuals(model: AgioModel, observations: Iterable[AgioObservation]) -> list[float]:
    """Observed minus fitted agio for each observation."""
    return [obs.agio - predict(model, obs.money_stock) for obs in observations]


def silver_value(agio: float, par: float) -> float:
    """Market value of bank money given coin par: par * (1 + agio)."""
    if agio <= -1.0:
        raise DomainError(f"agio must exceed -1, got {agio}")
    if par <= 0.0:
        raise DomainError(f"par must be > 0, got {par}")
    return par * (1.0 + agio)


# --- files -------------------------------------------------------------------

OBSERVATION_CSV_HEADER = ("label", "money_stock", "agio")


def load_observations(path: str | Path) -> tuple[AgioObservation, ...]:
    """Read a ``label,money_stock,agio`` CSV."""
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty observations file")
        if tuple(h.strip() for h in header) != OBSERVATION_CSV_HEADER:
            raise ParseError(
                f"expected header 'label,money_stock,agio', got {','.join(header)!r}",
                line=1,
            )
        observations = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"expected three columns, got {len(row)}", line=lineno)
            try:
                observations.append(
                    AgioObservation(
                        label=row[0].strip(),
                        money_stock=int(row[1]),
                        agio=float(row[2]),
                    )
                )
            except (ValueError, DomainError) as exc:
                raise ParseError(f"bad observation {row!r}: {exc}", line=lineno)
    return tuple(observations)


def save_observations(
    observations: Iterable[AgioObservation], path: str | Path
) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(OBSERVATION_CSV_HEADER)
        for obs in observations:
            writer.writerow([obs.label, obs.money_stock, repr(obs.agio)])


def model_json(model: AgioModel) -> str:
    return json.dumps(
        {"kappa": model.kappa, "m_ref": model.m_ref, "agio_ref": model.agio_ref},
        indent=2,
        sort_keys=True,
    )


def model_from_json(text: str) -> AgioModel:
    data = json.loads(text)
    return AgioModel(
        kappa=data["kappa"], m_ref=data["m_ref"], agio_ref=data["agio_ref"]
    )
