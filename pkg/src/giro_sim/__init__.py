"""Balance-sheet mechanics and political economy of money-financed stimulus.

Subpackages by concern:

- :mod:`giro_sim.ledger`     double-entry engine and the funding strategies
- :mod:`giro_sim.policy`     welfare model, budget solver, optimal monetization
- :mod:`giro_sim.population` heterogeneous inhabitants and the Condorcet oracle
- :mod:`giro_sim.market`     money stock to agio calibration
- :mod:`giro_sim.scenario`   dated timelines, the built-in Venice 1629-31 replay
- :mod:`giro_sim.cli`        the ``giro-sim`` command-line front end
"""

from . import errors, ledger, market, policy, population, scenario

__version__ = "0.1.0"

__all__ = ["errors", "ledger", "market", "policy", "population", "scenario"]
