"""Small dense complex linear algebra.

Everything here targets matrices of dimension <= 16 (two-qubit density
matrices and their Liouville-space generators), so clarity is preferred over
blocking or vectorisation tricks.
"""

import math

import numpy as np

from ..errors import ConvergenceError, NonHermitianError, NotPSDError, SingularMatrixError

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian_eig(m, herm_tol=HERMITIAN_TOL, max_sweeps=MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.

    Parameters
    ----------
    m : (n, n) array_like
        Hermitian matrix. The anti-Hermitian part must not exceed
        ``herm_tol`` element-wise.
    herm_tol : float
        Absolute Hermiticity tolerance.
    max_sweeps : int
        Cap on full cyclic sweeps before giving up.

    Returns
    -------
    w : (n,) ndarray
        Real eigenvalues in ascending order.
    v : (n, n) ndarray
        Orthonormal eigenvectors, ``v[:, k]`` belonging to ``w[k]``.
    """
    a = _as_square(m)
    skew = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if skew > herm_tol:
        raise NonHermitianError(f"matrix is not Hermitian: max |m - m^H| = {skew:.3e}")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n <= 1:
        return a.real.diagonal().copy(), v

    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    # plain Python scalars: numpy per-element overhead dominates at n <= 16
    a = a.tolist()
    v = v.tolist()
    rng = range(n)
    converged = False
    off = 0.0
    for _ in range(max_sweeps):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in rng for j in rng if i != j))
        if off <= 1e-15 * scale:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                if mag <= 1e-18 * scale:
                    continue
                phase_c = (apq / mag).conjugate()
                tau = (a[q][q].real - a[p][p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U = P R, with P = diag(.., e^{-i phi} at q, ..) removing the phase of a_pq
                u_qp = -s * phase_c
                u_qq = c * phase_c
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = x * c + y * u_qp
                    row[q] = x * s + y * u_qq
                rp, rq = a[p], a[q]
                cu_qp = u_qp.conjugate()
                cu_qq = u_qq.conjugate()
                for j in rng:
                    x, y = rp[j], rq[j]
                    rp[j] = c * x + cu_qp * y
                    rq[j] = s * x + cu_qq * y
                rp[q] = 0j
                rq[p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = x * c + y * u_qp
                    row[q] = x * s + y * u_qq
    if not converged:
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in rng for j in rng if i != j))
        if off > 1e-12 * scale:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})",
                residual=off,
            )
    a = np.array(a)
    v = np.array(v)

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_sqrt(m, neg_tol=1e-10, herm_tol=HERMITIAN_TOL):
    """Principal square root of a Hermitian positive semi-definite matrix.

    Eigenvalues in ``[-neg_tol, 0)`` are treated as zero; anything more
    negative raises :class:`NotPSDError`.
    """
    w, v = hermitian_eig(m, herm_tol=herm_tol)
    if w.size and w[0] < -neg_tol:
        raise NotPSDError(f"matrix is not positive semi-definite (min eigenvalue {w[0]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    out = (v * root) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def solve_linear(a, b):
    """Solve ``a x = b`` by Gaussian elimination with partial pivoting."""
    a = _as_square(a).copy()
    b = np.asarray(b, dtype=complex).copy()
    n = a.shape[0]
    if b.shape != (n,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({n},)")
    scale = np.max(np.abs(a)) if n else 0.0
    threshold = 1e-14 * scale
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) <= threshold or scale == 0.0:
            raise SingularMatrixError(
                f"matrix is numerically singular (pivot {abs(a[piv, k]):.3e} at column {k})"
            )
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            b[[k, piv]] = b[[piv, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        b[k + 1 :] -= factors * b[k]
    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x
