"""SLOCC classification of 2- and 3-qubit pure states from coefficient matrices.

A 2-qubit state is a product state iff its coefficient matrix is singular.
For three qubits, a genuinely entangled state is W-class iff at some
one-vs-rest cut one coefficient matrix is invertible, the pair is linearly
independent, and the quotient matrix has a single eigenvalue (vanishing
discriminant); it is GHZ-class otherwise.  Product and biseparable states
are screened off first by the Schmidt rank of each cut.

All zero tests use a relative tolerance of 1e-9 on normalized states; any
decision made within a factor of 10 of the tolerance sets the
``borderline`` flag, since tree size is discontinuous at class boundaries.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import Degenerate
from .states import PureState, coeff_matrices, split_halves

TOL = 1e-9
BORDERLINE_FACTOR = 10.0


class Class2(enum.Enum):
    PRODUCT = "product"
    ENTANGLED = "entangled"


class Kind3(enum.Enum):
    PRODUCT = "product"
    BISEPARABLE = "biseparable"
    GHZ = "GHZ"
    W = "W"


@dataclass(frozen=True)
class Evidence:
    """Which classification condition fired, and at which cut."""

    condition: str  # "1a" | "1b" | "1c" | "2a" | "2b" | "rank"
    partition: int


@dataclass(frozen=True)
class SloccClass3:
    kind: Kind3
    evidence: Evidence
    borderline: bool
    partition_qubit: int | None = None  # set for biseparable states


class _Margins:
    """Track how close decisive quantities came to their thresholds."""

    def __init__(self):
        self.borderline = False

    def decide(self, value: float, tol: float = TOL) -> bool:
        """True iff ``value`` exceeds ``tol``; flags decisions near it."""
        if tol / BORDERLINE_FACTOR < value < tol * BORDERLINE_FACTOR:
            self.borderline = True
        return value > tol


def classify2(state: PureState) -> Class2:
    """Product vs entangled for two qubits, via the coefficient determinant."""
    if state.n_qubits != 2:
        raise Degenerate("classify2 needs a 2-qubit state")
    det = np.linalg.det(state.amps.reshape(2, 2))
    return Class2.ENTANGLED if abs(det) > TOL else Class2.PRODUCT


def one_eigenvalue(m: np.ndarray, tol: float = TOL) -> bool:
    """True iff the 2x2 matrix has a single eigenvalue (zero discriminant)."""
    m = np.asarray(m, dtype=complex)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = tr * tr - 4.0 * det
    scale = max(1.0, abs(tr) ** 2, abs(det))
    return abs(disc) <= tol * scale


def _cut_rank_ratio(state: PureState, qubit: int) -> float:
    """sigma_2 / sigma_1 of the 2 x 4 matrix of the cut qubit|rest."""
    h0, h1 = split_halves(state.amps, qubit, 3)
    s = np.linalg.svd(np.stack([h0, h1]), compute_uv=False)
    return float(s[1] / s[0]) if s[0] > 0 else 0.0


def _disc_margin(m: np.ndarray) -> float:
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(1.0, abs(tr) ** 2, abs(det))
    return abs(tr * tr - 4.0 * det) / scale


def classify3(state: PureState) -> SloccClass3:
    """Full 3-qubit SLOCC class with evidence and a borderline flag.

    Decision procedure: Schmidt rank of each one-vs-rest cut screens
    product (all cuts rank 1) and biseparable (exactly one rank-1 cut)
    states; genuinely entangled states are split into W and GHZ by the
    coefficient-matrix conditions, scanning partitions 1, 2, 3 and
    recording the first condition that fires.
    """
    if state.n_qubits != 3:
        raise Degenerate("classify3 needs a 3-qubit state")
    margins = _Margins()

    separable_cuts = [q for q in (1, 2, 3) if not margins.decide(_cut_rank_ratio(state, q))]
    if len(separable_cuts) == 3:
        return SloccClass3(Kind3.PRODUCT, Evidence("rank", 1), margins.borderline)
    if len(separable_cuts) == 1:
        q = separable_cuts[0]
        return SloccClass3(Kind3.BISEPARABLE, Evidence("rank", q), margins.borderline, partition_qubit=q)
    if len(separable_cuts) == 2:
        # Two rank-1 cuts force the third to be rank 1 as well; seeing
        # exactly two is a numerical artifact, not a class.
        raise Degenerate(f"inconsistent cut ranks: separable cuts {separable_cuts}")

    # Genuinely entangled: scan for the W conditions (2a)/(2b) first; they
    # are class-exclusive, so GHZ is the complement.
    ghz_evidence = None
    zero_det_partition = None
    for q in (1, 2, 3):
        pair = coeff_matrices(state, q)
        det0, det1 = np.linalg.det(pair.c0), np.linalg.det(pair.c1)
        inv0 = margins.decide(abs(det0))
        inv1 = margins.decide(abs(det1))
        if inv0:
            m = np.linalg.solve(pair.c0, pair.c1)
            if not margins.decide(_disc_margin(m)):
                return SloccClass3(Kind3.W, Evidence("2a", q), margins.borderline)
            if ghz_evidence is None:
                ghz_evidence = Evidence("1a", q)
        if inv1:
            m = np.linalg.solve(pair.c1, pair.c0)
            if not margins.decide(_disc_margin(m)):
                return SloccClass3(Kind3.W, Evidence("2b", q), margins.borderline)
            if ghz_evidence is None:
                ghz_evidence = Evidence("1b", q)
        if not inv0 and not inv1 and zero_det_partition is None:
            zero_det_partition = q

    if ghz_evidence is not None:
        return SloccClass3(Kind3.GHZ, ghz_evidence, margins.borderline)
    if zero_det_partition is not None:
        # Genuine entanglement makes every pair linearly independent, so
        # a partition with both determinants zero is condition (1c).
        return SloccClass3(Kind3.GHZ, Evidence("1c", zero_det_partition), margins.borderline)
    raise Degenerate("all classification quantities are below tolerance")
