"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

Rotations are scheduled in round-robin (tournament) order so that every
round applies ``n // 2`` disjoint plane rotations at once; each round is then
a handful of vectorised row/column updates instead of a Python loop over
pairs. Below ``SCALAR_MAX_N`` the numpy call overhead dominates, so a plain
row-cyclic loop over nested lists is used instead.
"""

from __future__ import annotations

import math

import numpy as np

OFF_TOL = 1e-13
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-8
SCALAR_MAX_N = 12


class NotHermitianError(ValueError):
    """Raised when a matrix handed to the eigensolver is not Hermitian."""


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # players 0..m-1 with m even; a dummy index m-1 == n is dropped when n is odd
    m = n + (n % 2)
    order = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = order[i], order[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        order = [order[0]] + [order[-1]] + order[1:-1]
    return rounds


_SCHEDULES: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}


def _schedule(n: int):
    if n not in _SCHEDULES:
        _SCHEDULES[n] = _round_robin(n)
    return _SCHEDULES[n]


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _jacobi_scalar(a: list[list[complex]], n: int, threshold: float, max_sweeps: int, want_vectors: bool):
    """Row-cyclic Jacobi on nested lists; faster than the vectorised rounds for tiny ``n``."""
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)] if want_vectors else None
    thr2 = threshold * threshold
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            row = a[i]
            for j in range(n):
                if i != j:
                    z = row[j]
                    off += z.real * z.real + z.imag * z.imag
        if off < thr2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp, cp = s * phase.conjugate(), c * phase.conjugate()
                for r in range(n):
                    ar = a[r]
                    x, y = ar[p], ar[q]
                    ar[p] = x * c - y * sp
                    ar[q] = x * s + y * cp
                sq, cq = s * phase, c * phase
                ap, aq = a[p], a[q]
                for r in range(n):
                    x, y = ap[r], aq[r]
                    ap[r] = c * x - sq * y
                    aq[r] = s * x + cq * y
                ap[q] = 0j
                aq[p] = 0j
                if v is not None:
                    for r in range(n):
                        vr = v[r]
                        x, y = vr[p], vr[q]
                        vr[p] = x * c - y * sp
                        vr[q] = x * s + y * cp
    w = np.array([a[i][i].real for i in range(n)])
    return w, (np.array(v, dtype=complex) if v is not None else None)


def jacobi_eigh(
    mat: np.ndarray,
    tol: float = OFF_TOL,
    max_sweeps: int = MAX_SWEEPS,
    want_vectors: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ascending eigenvalues ``w`` and unitary ``v`` such
    that ``mat @ v == v @ diag(w)``. Convergence is declared when the
    off-diagonal Frobenius norm drops below ``tol`` (scaled by the Frobenius
    norm of ``mat`` when that exceeds one), or after ``max_sweeps`` sweeps.
    With ``want_vectors=False`` the second element is ``None``.
    """
    a = np.array(mat, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    herm_err = float(np.max(np.abs(a - a.conj().T))) if n else 0.0
    if herm_err > HERMITIAN_TOL * scale:
        raise NotHermitianError(f"matrix is not Hermitian (max |A - A^H| = {herm_err:.3e})")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    if n <= 1:
        return a.real.diagonal().copy(), v

    threshold = tol * scale
    if n <= SCALAR_MAX_N:
        w, v = _jacobi_scalar(a.tolist(), n, threshold, max_sweeps, want_vectors)
        order = np.argsort(w, kind="stable")
        return w[order], (v[:, order] if v is not None else None)
    rounds = _schedule(n)
    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > 1e-300
            if not np.any(active):
                continue
            p, q, apq, mag = p[active], q[active], apq[active], mag[active]
            phase = apq / mag
            app = a[p, p].real
            aqq = a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # J = [[c, s], [-s*conj(phase), c*conj(phase)]] in the (p, q) plane
            ap = a[:, p].copy()
            aq = a[:, q].copy()
            a[:, p] = ap * c - aq * (s * phase.conj())
            a[:, q] = ap * s + aq * (c * phase.conj())
            rp = a[p, :].copy()
            rq = a[q, :].copy()
            a[p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            a[q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            if not want_vectors:
                continue
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = vp * c - vq * (s * phase.conj())
            v[:, q] = vp * s + vq * (c * phase.conj())

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], (v[:, order] if want_vectors else None)


def hermitian_eigs(mat: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return jacobi_eigh(mat, want_vectors=False)[0]
