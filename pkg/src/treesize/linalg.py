"""Dense helpers for 2x2 coefficient matrices, pencils and small polynomials."""

from __future__ import annotations

import numpy as np

from .errors import Degenerate


def det2(m: np.ndarray) -> complex:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def adj2(m: np.ndarray) -> np.ndarray:
    """Adjugate: adj(M) M = det(M) I."""
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def pencil_coeffs(x0: np.ndarray, x1: np.ndarray) -> tuple[complex, complex, complex]:
    """(a, b, c) with det(alpha*x0 + beta*x1) = a alpha^2 + b alpha beta + c beta^2."""
    a = det2(x0)
    c = det2(x1)
    b = x0[0, 0] * x1[1, 1] + x0[1, 1] * x1[0, 0] - x0[0, 1] * x1[1, 0] - x0[1, 0] * x1[0, 1]
    return complex(a), complex(b), complex(c)


def projective_quadratic_roots(a: complex, b: complex, c: complex, tol: float = 1e-12):
    """Roots of ``a t^2 + b t + c`` on the projective line, as (alpha, beta) pairs.

    Includes roots at infinity (beta = 0) when the leading coefficient
    vanishes.  Raises Degenerate when all three coefficients are ~0.
    """
    scale = max(abs(a), abs(b), abs(c))
    if scale < tol:
        raise Degenerate("identically vanishing pencil")
    a, b, c = a / scale, b / scale, c / scale
    disc = np.sqrt(complex(b * b - 4.0 * a * c))
    if abs(a) >= tol:
        roots = [((-b + disc) / (2.0 * a), 1.0), ((-b - disc) / (2.0 * a), 1.0)]
    elif abs(c) >= tol:
        # Solve in s = beta/alpha; covers the root at infinity (s = 0).
        roots = [(1.0, (-b + disc) / (2.0 * c)), (1.0, (-b - disc) / (2.0 * c))]
    else:
        # b dominates: roots are 0 and infinity.
        roots = [(0.0, 1.0), (1.0, 0.0)]
    out = []
    for alpha, beta in roots:
        v = np.array([alpha, beta], dtype=complex)
        out.append(v / np.linalg.norm(v))
    return out


def pencil_double_root(x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
    """The (near-)double projective root of det(alpha*x0 + beta*x1).

    For W-class coefficient pencils the discriminant vanishes; the midpoint
    root -b/2a (or its reciprocal form) is the numerically stable choice.
    """
    a, b, c = pencil_coeffs(x0, x1)
    scale = max(abs(a), abs(b), abs(c))
    if scale < 1e-12:
        raise Degenerate("identically vanishing pencil")
    if abs(a) >= abs(c):
        if abs(a) < 1e-12 * scale:
            raise Degenerate("pencil has no stable double root")
        v = np.array([-b / (2.0 * a), 1.0], dtype=complex)
    else:
        v = np.array([1.0, -b / (2.0 * c)], dtype=complex)
    return v / np.linalg.norm(v)


def rank1_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Best rank-1 factorization m ~ outer(u, w); returns (u, w, residual).

    ``u`` is a unit vector, ``w`` carries the scale, and ``residual`` is
    sigma_2/sigma_1, the relative distance from rank 1.
    """
    u_mat, s, vh = np.linalg.svd(np.asarray(m, dtype=complex))
    residual = float(s[1] / s[0]) if s[0] > 0 and len(s) > 1 else 0.0
    return u_mat[:, 0], s[0] * vh[0, :], residual


def schmidt_terms(m: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """Schmidt decomposition of a 2-qubit coefficient matrix.

    Returns up to two (u, w) pairs with m = sum of outer(u, w); pairs with
    negligible weight are dropped.
    """
    u_mat, s, vh = np.linalg.svd(np.asarray(m, dtype=complex))
    out = []
    for k in range(len(s)):
        if s[k] > 1e-14 * s[0]:
            out.append((u_mat[:, k], s[k] * vh[k, :]))
    return out


def orth_complement(v: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to a 2-vector."""
    return np.array([-np.conj(v[1]), np.conj(v[0])], dtype=complex) / np.linalg.norm(v)


def basis_coefficients(x: np.ndarray, e: list[np.ndarray], f: list[np.ndarray]) -> np.ndarray:
    """Coefficients of x in the orthonormal product basis outer(e_k, f_l)."""
    out = np.empty((2, 2), dtype=complex)
    for k in range(2):
        for l in range(2):
            out[k, l] = e[k].conj() @ x @ f[l].conj()
    return out


def poly_coeffs_from_samples(fn, degree: int) -> np.ndarray:
    """Coefficients (highest degree first) of a polynomial given by evaluation.

    Samples ``fn`` at ``degree + 1`` integer points and solves the
    Vandermonde system; used to extract root-avoidance polynomials that are
    awkward to expand symbolically.
    """
    pts = np.arange(degree + 1, dtype=float) - degree / 2.0
    vals = np.array([fn(complex(p)) for p in pts], dtype=complex)
    vander = np.vander(pts, degree + 1)
    return np.linalg.solve(vander, vals)
