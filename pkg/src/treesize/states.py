"""Amplitude-vector states, coefficient matrices, and invertible local operators.

Basis convention is big-endian throughout: qubit 1 is the most significant
bit of the basis index, so for three qubits ``amps[0b011]`` is the amplitude
of ``|011>`` (qubit 1 in ``|0>``, qubits 2 and 3 in ``|1>``).

All operations are pure functions of immutable values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadPartition,
    DimensionMismatch,
    InvalidDensity,
    ZeroVector,
)

MAX_QUBITS = 4

NORM_TOL = 1e-12
ZERO_TOL = 1e-14
ILO_DET_TOL = 1e-12

# Conditioning floor for randomly drawn local operators; keeps randomized
# classification suites away from near-singular operators.
RANDOM_ILO_MIN_DET = 0.1


def _as_complex_vector(amps) -> np.ndarray:
    arr = np.asarray(amps, dtype=complex).ravel()
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("amplitudes must be finite")
    return arr


def _infer_n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim != 2**n or not 1 <= n <= MAX_QUBITS:
        raise DimensionMismatch(f"amplitude vector of length {dim} is not a 1-{MAX_QUBITS} qubit state")
    return n


@dataclass(frozen=True)
class PureState:
    """Normalized pure state of ``n_qubits`` qubits as a dense amplitude vector."""

    n_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _as_complex_vector(self.amps)
        if arr.shape != (2**self.n_qubits,):
            raise DimensionMismatch(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, got {arr.shape[0]}"
            )
        if abs(np.vdot(arr, arr).real - 1.0) > NORM_TOL:
            raise ValueError("state is not normalized; use normalize()")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit, qubit 1 first."""
        return self.amps.reshape((2,) * self.n_qubits)


def normalize(amps, n_qubits: int | None = None) -> PureState:
    """Build a :class:`PureState` from an arbitrary amplitude vector.

    Raises ZeroVector if every amplitude has modulus below 1e-14;
    otherwise rescales to unit norm, preserving direction (and phase).
    """
    arr = _as_complex_vector(amps)
    n = _infer_n_qubits(arr.shape[0]) if n_qubits is None else n_qubits
    norm = np.linalg.norm(arr)
    if norm < ZERO_TOL or np.max(np.abs(arr)) <= ZERO_TOL:
        raise ZeroVector("cannot normalize the zero vector")
    return PureState(n, arr / norm)


def basis_ket(bits: str) -> PureState:
    """Computational basis state from a bit string, e.g. ``basis_ket("011")``."""
    n = len(bits)
    amps = np.zeros(2**n, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return PureState(n, amps)


def overlap2(a: PureState, b: PureState) -> float:
    """Squared overlap ``|<a|b>|^2``; symmetric and global-phase invariant."""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatch(f"{a.n_qubits}-qubit state vs {b.n_qubits}-qubit state")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def overlap2_raw(u: np.ndarray, v: np.ndarray) -> float:
    """Squared overlap of two raw (possibly unnormalized) vectors."""
    nu = np.vdot(u, u).real
    nv = np.vdot(v, v).real
    if nu < ZERO_TOL**2 or nv < ZERO_TOL**2:
        raise ZeroVector("overlap of a zero vector is undefined")
    return float(abs(np.vdot(u, v)) ** 2 / (nu * nv))


def states_equal(a: PureState, b: PureState, tol: float = 1e-10) -> bool:
    """Equality of physical states: overlap2 >= 1 - tol (rays, not vectors)."""
    return overlap2(a, b) >= 1.0 - tol


@dataclass(frozen=True)
class ILO:
    """Invertible local operator: a nonsingular 2x2 matrix on one qubit (1-based)."""

    qubit: int
    m: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.m, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError("ILO matrix must be 2x2")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("ILO matrix must be finite")
        if abs(np.linalg.det(mat)) <= ILO_DET_TOL:
            raise ValueError("ILO matrix is singular")
        mat.setflags(write=False)
        object.__setattr__(self, "m", mat)

    def inverse(self) -> "ILO":
        return ILO(self.qubit, np.linalg.inv(self.m))


def apply_ilo_raw(amps: np.ndarray, m: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a raw amplitude vector (no renormalizing)."""
    if not 1 <= qubit <= n_qubits:
        raise BadPartition(f"qubit {qubit} out of range for {n_qubits} qubits")
    arr = np.asarray(amps, dtype=complex).reshape((2,) * n_qubits)
    out = np.tensordot(np.asarray(m, dtype=complex), arr, axes=([1], [qubit - 1]))
    return np.moveaxis(out, 0, qubit - 1).ravel()


def apply_ilo(state: PureState, op: ILO) -> PureState:
    """Transform ``state`` by ``op`` on its qubit and renormalize."""
    return normalize(apply_ilo_raw(state.amps, op.m, op.qubit, state.n_qubits), state.n_qubits)


def apply_ilos(state: PureState, ops) -> PureState:
    """Apply a sequence of ILOs (renormalizing once at the end)."""
    raw = state.amps
    for op in ops:
        raw = apply_ilo_raw(raw, op.m, op.qubit, state.n_qubits)
    return normalize(raw, state.n_qubits)


def split_halves(amps: np.ndarray, qubit: int, n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw halves (qubit=0 block, qubit=1 block) after moving ``qubit`` to the front."""
    if not 1 <= qubit <= n_qubits:
        raise BadPartition(f"qubit {qubit} out of range for {n_qubits} qubits")
    arr = np.asarray(amps, dtype=complex).reshape((2,) * n_qubits)
    moved = np.moveaxis(arr, qubit - 1, 0)
    return moved[0].ravel().copy(), moved[1].ravel().copy()


def unsplit_halves(h0: np.ndarray, h1: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Inverse of :func:`split_halves`."""
    stacked = np.stack([
        np.asarray(h0, dtype=complex).reshape((2,) * (n_qubits - 1)),
        np.asarray(h1, dtype=complex).reshape((2,) * (n_qubits - 1)),
    ])
    return np.moveaxis(stacked, 0, qubit - 1).ravel()


@dataclass(frozen=True)
class CoeffMatrixPair:
    """The 2x2 coefficient matrices of a 3-qubit state under a one-vs-rest cut.

    ``c0`` holds the amplitudes with the partition qubit in ``|0>``, ``c1``
    those with it in ``|1>``; the remaining qubits index rows and columns in
    ascending order.
    """

    partition_qubit: int
    c0: np.ndarray = field(repr=False)
    c1: np.ndarray = field(repr=False)

    def reassemble(self, n_qubits: int = 3) -> np.ndarray:
        """Raw amplitude vector that reproduces the original state exactly."""
        return unsplit_halves(self.c0.ravel(), self.c1.ravel(), self.partition_qubit, n_qubits)


def coeff_matrices(state: PureState, partition_qubit: int) -> CoeffMatrixPair:
    """Coefficient matrices of a 3-qubit state at the cut ``partition_qubit|rest``."""
    if state.n_qubits != 3:
        raise DimensionMismatch("coefficient matrices are defined for 3-qubit states")
    if partition_qubit not in (1, 2, 3):
        raise BadPartition(f"partition qubit must be 1, 2 or 3, got {partition_qubit}")
    h0, h1 = split_halves(state.amps, partition_qubit, 3)
    return CoeffMatrixPair(partition_qubit, h0.reshape(2, 2), h1.reshape(2, 2))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_state(n: int, seed=0) -> PureState:
    """Haar-like random state: complex-Gaussian amplitudes, normalized."""
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionMismatch(f"n must be between 1 and {MAX_QUBITS}")
    rng = _rng(seed)
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return normalize(z, n)


def random_ilo(qubit: int, seed=0, min_det: float = RANDOM_ILO_MIN_DET) -> ILO:
    """Random ILO with complex-Gaussian entries, resampled until |det| > ``min_det``."""
    rng = _rng(seed)
    while True:
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        if abs(np.linalg.det(m)) > min_det:
            return ILO(qubit, m)


def random_ilos(n: int, seed=0, min_det: float = RANDOM_ILO_MIN_DET) -> list[ILO]:
    """One random ILO per qubit, drawn from a single generator."""
    rng = _rng(seed)
    return [random_ilo(q, rng, min_det) for q in range(1, n + 1)]


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one, positive semidefinite matrix on ``n_qubits`` qubits."""

    n_qubits: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        d = 2**self.n_qubits
        if m.shape != (d, d):
            raise InvalidDensity(f"expected a {d}x{d} matrix")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise InvalidDensity("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12 or abs(np.trace(m).imag) > 1e-12:
            raise InvalidDensity("trace is not 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise InvalidDensity("matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)


def pure_to_density(state: PureState) -> DensityMatrix:
    return DensityMatrix(state.n_qubits, np.outer(state.amps, state.amps.conj()))


# ---------------------------------------------------------------------------
# JSON wire formats: {"n": int, "amps": [[re, im], ...]} for states and
# {"n": int, "mat": [[[re, im], ...], ...]} for density matrices.

def state_to_json(state: PureState) -> dict:
    return {"n": state.n_qubits, "amps": [[z.real, z.imag] for z in state.amps]}


def state_from_json(data) -> PureState:
    if isinstance(data, str):
        data = json.loads(data)
    amps = np.array([complex(re, im) for re, im in data["amps"]])
    n = int(data["n"])
    if amps.shape[0] != 2**n:
        raise DimensionMismatch(f"expected {2**n} amplitudes, got {amps.shape[0]}")
    return normalize(amps, n)


def density_to_json(rho: DensityMatrix) -> dict:
    return {"n": rho.n_qubits, "mat": [[[z.real, z.imag] for z in row] for row in rho.mat]}


def density_from_json(data) -> DensityMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    mat = np.array([[complex(re, im) for re, im in row] for row in data["mat"]])
    return DensityMatrix(int(data["n"]), mat)


# ---------------------------------------------------------------------------
# Canonical named states.

def p_state() -> PureState:
    """|000>, the product representative."""
    return basis_ket("000")


def b_state() -> PureState:
    """|0>(|01>+|10>)/sqrt(2), the biseparable representative (cut 1|23)."""
    return normalize([0, 1, 1, 0, 0, 0, 0, 0])


def ghz_state(n: int = 3) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0
    return normalize(amps, n)


def w_state() -> PureState:
    """(|001>+|010>+|100>)/sqrt(3), the maximally complex 3-qubit representative."""
    return normalize([0, 1, 1, 0, 1, 0, 0, 0])


def w_bar_state() -> PureState:
    """(|110>+|101>+|011>)/sqrt(3), the spin-flipped W state."""
    return normalize([0, 0, 0, 1, 0, 1, 1, 0])


def w0_state() -> PureState:
    """(|110>+|101>-2|011>)/sqrt(6)."""
    amps = np.zeros(8, dtype=complex)
    amps[0b110] = 1.0
    amps[0b101] = 1.0
    amps[0b011] = -2.0
    return normalize(amps)


def w1_state() -> PureState:
    """(|001>+|010>-2|100>)/sqrt(6)."""
    amps = np.zeros(8, dtype=complex)
    amps[0b001] = 1.0
    amps[0b010] = 1.0
    amps[0b100] = -2.0
    return normalize(amps)


def psi4_state() -> PureState:
    """The symmetric maximal-tree-size 4-qubit state (|0>|W0> + |1>|W1>)/sqrt(2)."""
    amps = np.zeros(16, dtype=complex)
    for b in (0b0110, 0b0101, 0b1001, 0b1010):
        amps[b] = 1.0
    amps[0b0011] = -2.0
    amps[0b1100] = -2.0
    return normalize(amps)


def d2_state() -> PureState:
    """The two-excitation Dicke state of four qubits (reducible, unlike psi4)."""
    amps = np.zeros(16, dtype=complex)
    for b in (0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100):
        amps[b] = 1.0
    return normalize(amps)


def bell_state() -> PureState:
    """(|00>+|11>)/sqrt(2)."""
    return normalize([1, 0, 0, 1])
