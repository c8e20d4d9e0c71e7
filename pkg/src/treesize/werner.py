"""Mixed-state tree size for the generalized Werner family of three qubits.

The family p |GHZ><GHZ| + (1-p)/8 I crosses the nested separable /
biseparable / W / GHZ mixed classes as p grows, so its tree size steps
through 3, 5, 8, 6 -- not monotonically: the W shell (tree size 8) sits
below the GHZ shell (tree size 6).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadEnsemble, BadParam
from .exact import ts3
from .states import DensityMatrix, PureState, ghz_state

#: Upper edge of the W shell; literature value quoted to seven digits,
#: not recomputed here.
P_W = 0.6955427

#: (upper edge, tree size, class label); intervals are (prev, edge].
THRESHOLDS = (
    (1.0 / 5.0, 3, "S"),
    (3.0 / 7.0, 5, "B\\S"),
    (P_W, 8, "W\\B"),
    (1.0, 6, "GHZ\\W"),
)

BOUNDARY_TOL = 1e-9


def werner_state(p: float) -> DensityMatrix:
    """p |GHZ><GHZ| + (1-p)/8 I on three qubits."""
    if not 0.0 <= p <= 1.0:
        raise BadParam(f"p must be in [0, 1], got {p}")
    ghz = ghz_state().amps
    mat = p * np.outer(ghz, ghz.conj()) + (1.0 - p) / 8.0 * np.eye(8)
    return DensityMatrix(3, mat)


@dataclass(frozen=True)
class WernerTs:
    ts: int
    klass: str
    boundary: bool  # p within 1e-9 of a class edge


def werner_ts(p: float) -> WernerTs:
    """Tree size of the generalized Werner state at mixing parameter ``p``.

    Edges belong to the lower class (intervals are half-open on the left).
    """
    if not 0.0 <= p <= 1.0:
        raise BadParam(f"p must be in [0, 1], got {p}")
    boundary = any(abs(p - edge) < BOUNDARY_TOL for edge, _ts, _label in THRESHOLDS[:-1])
    for edge, ts, label in THRESHOLDS:
        if p <= edge:
            return WernerTs(ts, label, boundary)
    return WernerTs(6, "GHZ\\W", boundary)


def mixed_ts_from_decomposition(ensemble: list[tuple[float, PureState]]) -> int:
    """Upper bound on a mixed state's tree size from one explicit ensemble.

    The tree size of a mixture is the minimum over decompositions of the
    largest component tree size; a single decomposition therefore only
    bounds it from above.
    """
    if not ensemble:
        raise BadEnsemble("ensemble is empty")
    weights = np.array([w for w, _ in ensemble], dtype=float)
    if np.any(weights <= 0.0) or abs(weights.sum() - 1.0) > 1e-9:
        raise BadEnsemble("weights must be positive and sum to 1")
    if any(state.n_qubits != 3 for _, state in ensemble):
        raise BadEnsemble("components must be 3-qubit states")
    return max(ts3(state).upper for _, state in ensemble)
