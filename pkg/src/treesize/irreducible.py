"""Irreducible one-vs-three forms of four-qubit states.

A 4-qubit state has the *irreducible* A|BCD form when, for every choice
of the single qubit A and every invertible operator on it, both
three-qubit halves of |0>|phi0> + |1>|phi1> stay in the W class.  These
are exactly the maximal-tree-size states.

Detection works per partition: both halves must be W-class; local
operators on the other three qubits then bring the pair to the normal
form |0>|phi_w> + |1>(|001>+|010>+|100>) with phi_w's |001> component
zeroed by a qubit-A shear.  Membership of phi_w + lambda*(W term) in the
W class for *all* lambda is equivalent to a low-degree polynomial in
lambda vanishing identically; its coefficients collapse to one of two
constraint families (phi_w's |000> component zero or scaled to -1).  A
nonvanishing polynomial has finitely many roots, and any lambda off the
root set converts to an explicit qubit-A shear witnessing reducibility.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .canonical import W_UNNORMALIZED, to_w_ilos
from .errors import BadParams, Degenerate, DegeneratePolynomial, DimensionMismatch
from .linalg import adj2, det2, poly_coeffs_from_samples
from .slocc import Kind3, classify3
from .states import ILO, PureState, normalize, split_halves, unsplit_halves

CONSTRAINT_TOL = 1e-9

# Directions added to the coefficient matrices of phi_w by lambda times the
# unnormalized W term (positions 001, 010, 100).
_W_DIR_C0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_W_DIR_C1 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)

# Same for the normalized GHZ state (positions 000 and 111, weight 1/sqrt2).
_GHZ_DIR_C0 = np.array([[2.0**-0.5, 0.0], [0.0, 0.0]], dtype=complex)
_GHZ_DIR_C1 = np.array([[0.0, 0.0], [0.0, 2.0**-0.5]], dtype=complex)


class Family(enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    NEITHER = "neither"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class AbcdForm:
    """Exact split |Psi> = w0 |0>|phi0> + w1 |1>|phi1> at one qubit."""

    partition_qubit: int
    phi0: PureState | None
    phi1: PureState | None
    weights: tuple[complex, complex]

    def reassemble(self) -> np.ndarray:
        h0 = self.weights[0] * self.phi0.amps if self.phi0 is not None else np.zeros(8)
        h1 = self.weights[1] * self.phi1.amps if self.phi1 is not None else np.zeros(8)
        return unsplit_halves(h0, h1, self.partition_qubit, 4)


def abcd_split(state: PureState, partition_qubit: int) -> AbcdForm:
    """Split a 4-qubit state at one qubit, normalizing each half."""
    if state.n_qubits != 4:
        raise DimensionMismatch("abcd_split needs a 4-qubit state")
    h0, h1 = split_halves(state.amps, partition_qubit, 4)
    out = []
    for h in (h0, h1):
        norm = np.linalg.norm(h)
        if norm < 1e-12:
            out.append((None, 0.0))
        else:
            out.append((PureState(3, h / norm), complex(norm)))
    return AbcdForm(partition_qubit, out[0][0], out[1][0], (out[0][1], out[1][1]))


@dataclass(frozen=True)
class WNormalForm:
    """Coefficients c1..c8 of phi_w in |0>|phi_w> + |1>(|001>+|010>+|100>).

    ``c[k]`` is the paper-style coefficient c_{k+1}; the |001> and |111>
    components (c2, c8) must vanish for the form to be meaningful.
    """

    c: tuple

    def __post_init__(self):
        c = list(complex(z) for z in self.c)
        if len(c) != 8:
            raise BadParams("normal form has 8 coefficients")
        scale = max(1.0, *(abs(z) for z in c))
        if abs(c[1]) > CONSTRAINT_TOL * scale or abs(c[7]) > CONSTRAINT_TOL * scale:
            raise BadParams("normal form requires c2 = c8 = 0")
        c[1] = 0.0  # drop float residue; zero exactly by definition
        c[7] = 0.0
        object.__setattr__(self, "c", tuple(c))

    def phi_w(self) -> np.ndarray:
        return np.array(self.c, dtype=complex)


def check_family(nf: WNormalForm, tol: float = CONSTRAINT_TOL) -> Family:
    """Which constraint family the normal form satisfies, if any.

    Case 1: c1 = c3 = c5 = 0 and c4 = (sqrt(c6) +- sqrt(c7))^2 for a sign.
    Case 2: c1 = -1 and c4 = (c3/2)^2, c6 = (c5/2)^2, c7 = ((c3-c5)/2)^2.
    Both also need c4, c6, c7 nonzero.
    """
    c1, _c2, c3, c4, c5, c6, c7, _c8 = nf.c
    scale = max(1.0, *(abs(z) for z in nf.c))
    if min(abs(c4), abs(c6), abs(c7)) <= tol * scale:
        return Family.NEITHER
    p, q = np.sqrt(complex(c6)), np.sqrt(complex(c7))
    if max(abs(c1), abs(c3), abs(c5)) <= tol * scale:
        if min(abs(c4 - (p + q) ** 2), abs(c4 - (p - q) ** 2)) <= tol * scale**2:
            return Family.CASE1
        return Family.NEITHER
    if abs(c1 + 1.0) <= tol:
        ok = (
            abs(c4 - (c3 / 2.0) ** 2) <= tol * scale**2
            and abs(c6 - (c5 / 2.0) ** 2) <= tol * scale**2
            and abs(c7 - ((c3 - c5) / 2.0) ** 2) <= tol * scale**2
        )
        return Family.CASE2 if ok else Family.NEITHER
    return Family.NEITHER


@dataclass(frozen=True)
class Witness:
    """Recipe proving reducibility: one qubit-A operator whose split escapes W."""

    partition_qubit: int
    ilo: ILO
    lambda_star: complex | None
    escaped_class: Kind3


@dataclass(frozen=True)
class IrreducibilityVerdict:
    irreducible: bool
    family: Family
    witness: Witness | None


@dataclass(frozen=True)
class PartitionReduction:
    """Everything learned while reducing one partition to normal form."""

    partition_qubit: int
    a_op: np.ndarray  # combined qubit-A operator applied so far
    bcd_ops: list  # ILOs on the other three qubits (global indices)
    normal_form: WNormalForm | None
    family: Family
    witness: Witness | None


def lambda_condition_roots(
    x0: np.ndarray,
    x1: np.ndarray,
    d0: np.ndarray,
    d1: np.ndarray,
    degree: int = 4,
    tol: float = 1e-10,
) -> list[complex] | None:
    """Roots in lambda of the single-eigenvalue condition for the pencil pair.

    The condition tr(adj(C1) C0)^2 = 4 det(C0) det(C1) with
    C_i(lambda) = x_i + lambda d_i is polynomial in lambda; its
    coefficients are recovered by sampling.  Returns None when the
    polynomial vanishes identically (the condition holds for every
    lambda), otherwise the root list.
    """

    def poly(lam: complex) -> complex:
        c0 = x0 + lam * d0
        c1 = x1 + lam * d1
        tr = np.trace(adj2(c1) @ c0)
        return tr * tr - 4.0 * det2(c0) * det2(c1)

    coeffs = poly_coeffs_from_samples(poly, degree)
    scale = max(np.max(np.abs(x0)), np.max(np.abs(x1)), 1e-300) ** 4
    if np.max(np.abs(coeffs)) <= tol * max(scale, 1.0):
        return None
    lead = np.argmax(np.abs(coeffs) > 1e-12 * np.max(np.abs(coeffs)))
    return [complex(r) for r in np.roots(coeffs[lead:])]


def quartic_lambda_roots(phi_w: PureState) -> list[complex]:
    """Roots lambda where phi_w + lambda GHZ can satisfy the W-class condition.

    ``phi_w`` is paired against the normalized GHZ state as in
    |0>|phi_w> + |1>|GHZ>.  At most four roots; any other lambda takes the
    combination out of the W class.  Raises DegeneratePolynomial if the
    condition degenerates (it cannot for a GHZ pairing of a W-class state).
    """
    if phi_w.n_qubits != 3:
        raise DimensionMismatch("quartic_lambda_roots needs a 3-qubit state")
    h0, h1 = split_halves(phi_w.amps, 1, 3)
    roots = lambda_condition_roots(h0.reshape(2, 2), h1.reshape(2, 2), _GHZ_DIR_C0, _GHZ_DIR_C1)
    if roots is None:
        raise DegeneratePolynomial("single-eigenvalue condition vanishes identically")
    return roots


def _shear(lam: complex) -> np.ndarray:
    """Qubit-A operator |0> -> |0>, |1> -> lam|0> + |1>."""
    return np.array([[1.0, lam], [0.0, 1.0]], dtype=complex)


def _half_class(h: np.ndarray) -> Kind3 | None:
    """SLOCC class of a raw half, or None when it is (numerically) zero."""
    norm = np.linalg.norm(h)
    if norm < 1e-12:
        return None
    return classify3(normalize(h, 3)).kind


def _escape_kind(kind: Kind3 | None) -> Kind3:
    """Map a non-W half class onto the witness vocabulary."""
    if kind is None or kind == Kind3.PRODUCT:
        return Kind3.PRODUCT
    return kind


def _apply_bcd(amps4: np.ndarray, partition_qubit: int, mats: list[np.ndarray]) -> tuple[np.ndarray, list]:
    """Apply 2x2 operators to the three non-partition qubits of a raw 4-qubit vector."""
    from .states import apply_ilo_raw

    others = [q for q in (1, 2, 3, 4) if q != partition_qubit]
    ops = []
    out = amps4
    for mat, q in zip(mats, others):
        out = apply_ilo_raw(out, mat, q, 4)
        ops.append(ILO(q, mat))
    return out, ops


def _verify_escape(amps4: np.ndarray, partition_qubit: int, a_op: np.ndarray):
    """Class of the |0>-half after applying ``a_op``; None if still W or zero-ambiguous."""
    moved = np.asarray(amps4).reshape((2,) * 4)
    transformed = np.tensordot(a_op, np.moveaxis(moved, partition_qubit - 1, 0), axes=([1], [0]))
    h0 = transformed[0].ravel()
    kind = _half_class(h0)
    if kind is None or kind == Kind3.W:
        return None
    return kind


def reduce_partition(state: PureState, partition_qubit: int) -> PartitionReduction:
    """Reduce one partition to the paper normal form or produce a witness."""
    h0, h1 = split_halves(state.amps, partition_qubit, 4)
    n0, n1 = np.linalg.norm(h0), np.linalg.norm(h1)

    # Degenerate splits: a zero half, or proportional halves (some qubit-A
    # operator zeroes a half), mean the state factors across this cut.
    if n0 < 1e-12 or n1 < 1e-12:
        return PartitionReduction(
            partition_qubit,
            np.eye(2, dtype=complex),
            [],
            None,
            Family.NOT_APPLICABLE,
            Witness(partition_qubit, ILO(partition_qubit, np.eye(2)), None, Kind3.PRODUCT),
        )
    inner = abs(np.vdot(h0, h1)) / (n0 * n1)
    if inner > 1.0 - 1e-12:
        coeff = np.vdot(h0, h1) / (n0 * n0)
        a_op = np.array([[1.0, 0.0], [-coeff, 1.0]], dtype=complex)
        return PartitionReduction(
            partition_qubit,
            a_op,
            [],
            None,
            Family.NOT_APPLICABLE,
            Witness(partition_qubit, ILO(partition_qubit, a_op), None, Kind3.PRODUCT),
        )

    kinds = [_half_class(h0), _half_class(h1)]
    for idx, kind in enumerate(kinds):
        if kind != Kind3.W:
            return PartitionReduction(
                partition_qubit,
                np.eye(2, dtype=complex),
                [],
                None,
                Family.NOT_APPLICABLE,
                Witness(partition_qubit, ILO(partition_qubit, np.eye(2)), None, _escape_kind(kind)),
            )

    # Both halves W-class: send the |1> half to the unnormalized W term.
    mats, t = to_w_ilos(h1)
    amps, bcd_ops = _apply_bcd(state.amps, partition_qubit, mats)
    a_op = np.eye(2, dtype=complex)

    def halves(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        moved = np.moveaxis(a.reshape((2,) * 4), partition_qubit - 1, 0)
        return moved[0].ravel(), moved[1].ravel()

    def apply_a(mat: np.ndarray):
        nonlocal amps, a_op
        cond = np.linalg.cond(mat)
        if not np.isfinite(cond) or cond > 1e8:
            raise Degenerate(f"normal-form operator has condition number {cond:.2e}")
        arr = np.moveaxis(amps.reshape((2,) * 4), partition_qubit - 1, 0)
        arr = np.tensordot(mat, arr, axes=([1], [0]))
        amps = np.moveaxis(arr, 0, partition_qubit - 1).ravel()
        a_op = mat @ a_op

    apply_a(np.diag([1.0, 1.0 / t]).astype(complex))
    phi_w, w_half = halves(amps)
    if np.max(np.abs(w_half - W_UNNORMALIZED)) > 1e-8 * max(1.0, np.max(np.abs(w_half))):
        raise Degenerate("W canonicalization did not land on the W term")
    # Zero the |001> coefficient with the shear that subtracts c2 * W.
    apply_a(np.array([[1.0, -phi_w[0b001]], [0.0, 1.0]], dtype=complex))
    phi_w, w_half = halves(amps)
    # Rescale a nonzero |000> coefficient to -1 (the c1 != 0 family).
    c1 = phi_w[0b000]
    if abs(c1) > CONSTRAINT_TOL:
        apply_a(np.diag([-1.0 / c1, 1.0]).astype(complex))
        phi_w, w_half = halves(amps)

    x0, x1 = (h.reshape(2, 2) for h in split_halves(phi_w, 1, 3))
    roots = lambda_condition_roots(x0, x1, _W_DIR_C0, _W_DIR_C1)

    if roots is not None:
        lam = 1.0 + max((abs(r) for r in roots), default=0.0)
        for bump in range(8):
            candidate = lam + bump
            kind = _verify_escape(amps, partition_qubit, _shear(candidate))
            if kind is not None:
                witness_op = _shear(candidate) @ a_op
                return PartitionReduction(
                    partition_qubit,
                    witness_op,
                    bcd_ops,
                    None,
                    Family.NOT_APPLICABLE,
                    Witness(
                        partition_qubit,
                        ILO(partition_qubit, witness_op),
                        complex(candidate),
                        kind,
                    ),
                )
        raise Degenerate("could not verify a lambda escape despite nonvanishing condition")

    nf = WNormalForm(tuple(phi_w))
    family = check_family(nf)
    if family == Family.NEITHER:
        # The eigenvalue condition holds identically but a nonzero-ness
        # constraint failed; hunt for a linear-dependence escape.
        for candidate in (0.0, 1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 3.0):
            kind = _verify_escape(amps, partition_qubit, _shear(candidate))
            if kind is not None:
                witness_op = _shear(candidate) @ a_op
                return PartitionReduction(
                    partition_qubit,
                    witness_op,
                    bcd_ops,
                    nf,
                    Family.NEITHER,
                    Witness(partition_qubit, ILO(partition_qubit, witness_op), complex(candidate), kind),
                )
        raise Degenerate("constraint family check failed but no escape found")
    return PartitionReduction(partition_qubit, a_op, bcd_ops, nf, family, None)


def analyze_irreducibility(state: PureState) -> tuple[IrreducibilityVerdict, list[PartitionReduction]]:
    """Verdict plus the per-partition reductions (partition 1 first)."""
    if state.n_qubits != 4:
        raise DimensionMismatch("irreducibility is defined for 4-qubit states")
    reductions = []
    for q in (1, 2, 3, 4):
        red = reduce_partition(state, q)
        reductions.append(red)
        if red.witness is not None:
            return IrreducibilityVerdict(False, Family.NOT_APPLICABLE, red.witness), reductions
    return IrreducibilityVerdict(True, reductions[0].family, None), reductions


def is_irreducible(state: PureState) -> IrreducibilityVerdict:
    """Whether every one-vs-three split under every qubit-A operator stays W-class."""
    verdict, _ = analyze_irreducibility(state)
    return verdict


def build_family_state(family: Family, params) -> PureState:
    """Construct |0>|phi_w> + |1>(|001>+|010>+|100>) from family parameters.

    Case 1 takes ``(c6, c7, sign)`` with c6, c7 nonzero and sign +-1;
    case 2 takes ``(c3, c5)`` with c3, c5 nonzero and distinct.  The result
    is always irreducible.
    """
    phi = np.zeros(8, dtype=complex)
    if family == Family.CASE1:
        c6, c7, sign = complex(params[0]), complex(params[1]), int(params[2])
        if abs(c6) < 1e-9 or abs(c7) < 1e-9:
            raise BadParams("case 1 needs c6 and c7 nonzero")
        if sign not in (1, -1):
            raise BadParams("sign must be +1 or -1")
        c4 = (np.sqrt(c6) + sign * np.sqrt(c7)) ** 2
        if abs(c4) < 1e-9 * max(abs(c6), abs(c7)):
            raise BadParams("parameters make c4 vanish")
        phi[0b011], phi[0b101], phi[0b110] = c4, c6, c7
    elif family == Family.CASE2:
        c3, c5 = complex(params[0]), complex(params[1])
        if abs(c3) < 1e-9 or abs(c5) < 1e-9 or abs(c3 - c5) < 1e-9:
            raise BadParams("case 2 needs c3, c5 nonzero and distinct")
        phi[0b000] = -1.0
        phi[0b010] = c3
        phi[0b011] = (c3 / 2.0) ** 2
        phi[0b100] = c5
        phi[0b101] = (c5 / 2.0) ** 2
        phi[0b110] = ((c3 - c5) / 2.0) ** 2
    else:
        raise BadParams(f"no construction for family {family}")
    return normalize(unsplit_halves(phi, W_UNNORMALIZED, 1, 4), 4)
