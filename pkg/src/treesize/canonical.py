"""Constructive SLOCC normal forms for 3-qubit states.

These routines turn class membership into explicit algebra:

* a product state factors into single-qubit vectors,
* a GHZ-class state splits into exactly two product terms (via the
  coefficient pencil det(alpha*C0 + beta*C1), whose two roots mark the
  rank-1 combinations),
* a W-class state is mapped onto the unnormalized |001>+|010>+|100> by
  explicit local operators (the pencil has a double root there).

Everything returns raw vectors or operators plus enough bookkeeping to
verify the reconstruction exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import Degenerate
from .linalg import (
    basis_coefficients,
    orth_complement,
    pencil_coeffs,
    pencil_double_root,
    projective_quadratic_roots,
    rank1_factor,
)
from .states import split_halves

ILO_CONDITION_LIMIT = 1e8

W_UNNORMALIZED = np.zeros(8, dtype=complex)
W_UNNORMALIZED[0b001] = W_UNNORMALIZED[0b010] = W_UNNORMALIZED[0b100] = 1.0

GHZ_UNNORMALIZED = np.zeros(8, dtype=complex)
GHZ_UNNORMALIZED[0b000] = GHZ_UNNORMALIZED[0b111] = 1.0


def product_factors(amps: np.ndarray, n_qubits: int, tol: float = 1e-9) -> list[np.ndarray]:
    """Per-qubit 2-vectors whose tensor product reproduces ``amps``.

    Raises Degenerate if some cut is further than ``tol`` from rank 1.
    """
    amps = np.asarray(amps, dtype=complex)
    factors = []
    rest = amps
    for k in range(n_qubits - 1):
        m = rest.reshape(2, -1)
        u, w, residual = rank1_factor(m)
        if residual > tol:
            raise Degenerate(f"cut {k + 1} has rank-1 residual {residual:.2e}")
        factors.append(u)
        rest = w
    factors.append(rest)
    return factors


def ghz_terms(amps: np.ndarray, tol: float = 1e-8):
    """Two product terms summing to the 3-qubit GHZ-class vector ``amps``.

    Returns a list of two (e, u, w) triples of single-qubit vectors with
    sum of e x u x w equal to ``amps``.  The split qubit is chosen as the
    cut whose pencil roots are best separated.
    """
    best = None
    for q in (1, 2, 3):
        h0, h1 = split_halves(amps, q, 3)
        x0, x1 = h0.reshape(2, 2), h1.reshape(2, 2)
        try:
            roots = projective_quadratic_roots(*pencil_coeffs(x0, x1))
        except Degenerate:
            continue
        sep = abs(roots[0][0] * roots[1][1] - roots[0][1] * roots[1][0])
        if best is None or sep > best[0]:
            best = (sep, q, x0, x1, roots)
    if best is None or best[0] < tol:
        raise Degenerate("no cut gives two separated pencil roots; not GHZ-like")
    _sep, q, x0, x1, roots = best

    f = np.array([roots[0], roots[1]], dtype=complex)  # rows: rank-1 combos
    e_vectors = np.linalg.inv(f)  # columns
    terms = []
    for j in range(2):
        chi = roots[j][0] * x0 + roots[j][1] * x1
        u, w, residual = rank1_factor(chi)
        if residual > tol:
            raise Degenerate(f"pencil root combination has rank-1 residual {residual:.2e}")
        terms.append((q, e_vectors[:, j].copy(), u, w))
    return terms


def _map_pair_to_basis(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """2x2 matrix sending p -> |0> and q -> |1>."""
    basis = np.column_stack([p, q])
    cond = np.linalg.cond(basis)
    if not np.isfinite(cond) or cond > ILO_CONDITION_LIMIT:
        raise Degenerate(f"canonicalizing operator has condition number {cond:.2e}")
    return np.linalg.inv(basis)


def to_ghz_ilos(amps: np.ndarray) -> list[np.ndarray]:
    """Local 2x2 operators M1, M2, M3 with (M1 x M2 x M3) amps = |000> + |111>.

    The input must be GHZ-class (two product terms exist); scales are
    absorbed into the term vectors so the result is exact.
    """
    terms = ghz_terms(amps)
    split_qubit = terms[0][0]
    vec_pairs = [[], [], []]
    for _q, e, u, w in terms:
        vec_pairs[0].append(e)
        vec_pairs[1].append(u)
        vec_pairs[2].append(w)
    mats_local = [_map_pair_to_basis(pair[0], pair[1]) for pair in vec_pairs]
    # Reorder from (split qubit first) back to qubits 1, 2, 3.
    order = [split_qubit] + [q for q in (1, 2, 3) if q != split_qubit]
    out: list[np.ndarray] = [None, None, None]
    for mat, q in zip(mats_local, order):
        out[q - 1] = mat
    return out


def to_w_ilos(amps: np.ndarray) -> tuple[list[np.ndarray], complex]:
    """Local operators and scale with (M1 x M2 x M3) amps = t (|001>+|010>+|100>).

    Constructive version of W-class membership.  The coefficient pencil at
    the cut 1|23 has a double root; the rank-1 combination supplies the
    |1>|00> term and the complementary combination is shaped onto
    |0>(|01>+|10>) by completing the local operators.
    """
    amps = np.asarray(amps, dtype=complex)
    h0, h1 = split_halves(amps, 1, 3)
    x0, x1 = h0.reshape(2, 2), h1.reshape(2, 2)

    root = pencil_double_root(x0, x1)
    chi = root[0] * x0 + root[1] * x1
    u3, w4, residual = rank1_factor(chi)
    if residual > 1e-6:
        raise Degenerate(f"double-root combination has rank-1 residual {residual:.2e}")
    sigma = np.linalg.norm(w4)
    w4n = w4 / sigma

    gd = orth_complement(root)  # complementary combination, off the root
    x_tilde = gd[0] * x0 + gd[1] * x1

    u3_perp = orth_complement(u3)
    w4_perp = orth_complement(w4n)
    coef = basis_coefficients(x_tilde, [u3, u3_perp], [w4n, w4_perp])
    a_c, b_c, c_c, d_c = coef[0, 0], coef[0, 1], coef[1, 0], coef[1, 1]
    scale = max(abs(a_c), abs(b_c), abs(c_c), abs(d_c), 1e-300)
    if abs(d_c) > 1e-6 * scale:
        # The component on u3_perp x w4_perp vanishes identically on the
        # W class; a large value means the input is not W-class.
        raise Degenerate(f"not W-class: residual component {abs(d_c):.2e}")
    if abs(b_c) < 1e-9 * scale or abs(c_c) < 1e-9 * scale:
        raise Degenerate("complementary combination is numerically rank deficient")

    # M3: u3 -> |0>, u3_perp -> (0, b); M4: w4n -> |0>, w4_perp -> (-a/b, c).
    m3 = np.column_stack([np.array([1.0, 0.0]), np.array([0.0, b_c])]) @ _map_pair_to_basis(u3, u3_perp)
    m4 = np.column_stack([np.array([1.0, 0.0]), np.array([-a_c / b_c, c_c])]) @ _map_pair_to_basis(
        w4n, w4_perp
    )
    # M2 rows are the combination coefficients; rescale the first row so the
    # transformed complement weight (b*c) matches the rank-1 weight (sigma).
    t = sigma
    r = sigma / (b_c * c_c)
    m2 = np.array([r * gd, root], dtype=complex)

    for m in (m2, m3, m4):
        cond = np.linalg.cond(m)
        if not np.isfinite(cond) or cond > ILO_CONDITION_LIMIT:
            raise Degenerate(f"canonicalizing operator has condition number {cond:.2e}")
    return [m2, m3, m4], complex(t)
