"""Matrix form of the multiple-scales construction.

Works on the complex column ``X = (rho12, rho21, alpha30)`` which obeys
``dX/dtau = eps * (A0 + A1(tau)) X``.  This path is kept independent of
:mod:`rabims.closed_form` and is used as an oracle for it.
"""

from __future__ import annotations

import math

import numpy as np

from .core import StateVector3

MATRIX_IDS = ("A0", "A1", "A2", "A3", "A4", "Q", "Qinv", "D", "expD", "B", "G1", "W", "U")

FD_STEP = 1e-5

A0 = 0.5j * np.array([[0, 0, 1], [0, 0, -1], [2, -2, 0]], dtype=complex)
A3 = 0.5j * np.diag([1.0, -1.0, 0.0]).astype(complex)
Q = np.array([[1, -1, 1], [-1, 1, 1], [2, 2, 0]], dtype=complex)
D = np.diag([1j, -1j, 0.0])
U = np.array([[1, 1, 0], [-1j, 1j, 0], [0, 0, 1]], dtype=complex)


def _inverse_3x3(m: np.ndarray) -> np.ndarray:
    """Adjugate over determinant."""
    a = m
    cof = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = a[rows[0], cols[0]] * a[rows[1], cols[1]] - a[rows[0], cols[1]] * a[rows[1], cols[0]]
            cof[i, j] = (-1) ** (i + j) * minor
    det = np.dot(a[0], cof[0])
    return cof.T / det


QINV = _inverse_3x3(Q)


def a1(t1: float) -> np.ndarray:
    e, ec = np.exp(-1j * t1), np.exp(1j * t1)
    return 0.5j * np.array([[0, 0, e], [0, 0, -ec], [2 * ec, -2 * e, 0]], dtype=complex)


def a2(t1: float) -> np.ndarray:
    e, ec = np.exp(-1j * t1), np.exp(1j * t1)
    return 0.5 * np.array([[0, 0, -e], [0, 0, -ec], [2 * ec, 2 * e, 0]], dtype=complex)


def a4(t1: float) -> np.ndarray:
    return -0.25 * np.array(
        [[0, np.exp(-2j * t1), 0], [np.exp(2j * t1), 0, 0], [0, 0, 0]], dtype=complex
    )


def exp_d(t2: float) -> np.ndarray:
    return np.diag([np.exp(1j * t2), np.exp(-1j * t2), 1.0 + 0j])


def g1(t2: float) -> np.ndarray:
    sh = math.sin(0.5 * t2) ** 2
    s = math.sin(t2)
    return 0.5 * np.array(
        [[-1j * s, 0, sh], [0, 1j * s, sh], [2 * sh, 2 * sh, 0]], dtype=complex
    )


def expm_A0(t2: float) -> np.ndarray:
    return Q @ exp_d(t2) @ QINV


def w_matrix(t1: float, t2: float) -> np.ndarray:
    return g1(t2) @ expm_A0(-t2) + a2(t1) - a2(0.0)


def b_matrix() -> np.ndarray:
    comm = A0 @ a2(0.0) - a2(0.0) @ A0
    return QINV @ (A3 - comm) @ Q


def build(matrix_id: str, t1: float = 0.0, t2: float = 0.0) -> np.ndarray:
    """Return one of the fixed 3x3 matrices; time-independent ones ignore
    ``t1``/``t2``."""
    table = {
        "A0": lambda: A0.copy(),
        "A1": lambda: a1(t1),
        "A2": lambda: a2(t1),
        "A3": lambda: A3.copy(),
        "A4": lambda: a4(t1),
        "Q": lambda: Q.copy(),
        "Qinv": lambda: QINV.copy(),
        "D": lambda: D.copy(),
        "expD": lambda: exp_d(t2),
        "B": b_matrix,
        "G1": lambda: g1(t2),
        "W": lambda: w_matrix(t1, t2),
        "U": lambda: U.copy(),
    }
    try:
        return table[matrix_id]()
    except KeyError:
        raise ValueError(f"unknown matrix id {matrix_id!r}; expected one of {MATRIX_IDS}") from None


def _vec(X0) -> np.ndarray:
    if isinstance(X0, StateVector3):
        return X0.as_array()
    return np.asarray(X0, dtype=complex)


def rwa_matrix_form(X0, eps: float, tau: float) -> StateVector3:
    x = Q @ exp_d(eps * tau) @ QINV @ _vec(X0)
    return StateVector3.from_array(x)


def y1_full(X0, t1: float, t2: float) -> StateVector3:
    """First-order correction ``Y1(t1, t2) = W(t1, t2) exp(A0 t2) X0``."""
    return StateVector3.from_array(w_matrix(t1, t2) @ expm_A0(t2) @ _vec(X0))


def x1_matrix_form(X0, eps: float, tau: float) -> StateVector3:
    t2 = eps * tau
    y0 = expm_A0(t2) @ _vec(X0)
    x = y0 + eps * (w_matrix(tau, t2) @ y0)
    return StateVector3.from_array(x)


def _central_diff(f, t: float, h: float) -> np.ndarray:
    return (f(t + h) - f(t - h)) / (2.0 * h)


def secular_residual_O1(X0, t2: float, h: float = FD_STEP) -> float:
    """Norm of ``A0 Y0 - dY0/dt2`` along ``Y0(0, t2) = exp(A0 t2) X0``."""
    x0 = _vec(X0)

    def y0(t):
        return expm_A0(t) @ x0

    return float(np.linalg.norm(A0 @ y0(t2) - _central_diff(y0, t2, h)))


def secular_residual_O2(X0, t2: float, h: float = FD_STEP) -> float:
    """Norm of the second-order solvability condition with
    ``Y1(0, t2) = G1(t2) X0``."""
    x0 = _vec(X0)
    a2_0 = a2(0.0)
    generator = (A0 @ a2_0 - a2_0 @ A0) - A3

    def y1(t):
        return g1(t) @ x0

    res = _central_diff(y1, t2, h) - A0 @ y1(t2) + generator @ (expm_A0(t2) @ x0)
    return float(np.linalg.norm(res))
