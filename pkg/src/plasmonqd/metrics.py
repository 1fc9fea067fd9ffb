"""Concurrence and quantum Fisher information of two-qubit states."""

import numpy as np

from .errors import NotPSDError
from .numerics import hermitian_eig, hermitian_sqrt

NEG_TOL = 1e-10
PAIR_TOL = 1e-12

_SY = np.array([[0.0, -1j], [1j, 0.0]])
SY_SY = np.kron(_SY, _SY)


def spin_flip(rho):
    """Wootters spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    rho = np.asarray(rho, dtype=complex)
    return SY_SY @ rho.conj() @ SY_SY


def _clamped(w, what):
    if w.size and w[0] < -NEG_TOL:
        raise NotPSDError(f"{what} has eigenvalue {w[0]:.3e} < -{NEG_TOL:.0e}")
    return np.clip(w, 0.0, None)


def concurrence(rho):
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_k are the square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho),
    in descending order.
    """
    rho = np.asarray(rho, dtype=complex)
    root = hermitian_sqrt(rho, neg_tol=NEG_TOL)
    m = root @ spin_flip(rho) @ root
    w, _ = hermitian_eig(0.5 * (m + m.conj().T))
    lam = np.sqrt(_clamped(w, "sqrt(rho) rho~ sqrt(rho)"))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1:].sum())))


def relative_phase_generator():
    """H = (sigma_z x I - I x sigma_z) / 2 with sigma_z |e> = +|e>.

    On (|gg>, |ge>, |eg>, |ee>) this is diag(0, -1, +1, 0). A phase phi
    imprinted as exp(-i phi H) gives the two qubits opposite phase shifts;
    after m repetitions the phase is bounded by dphi >= 1 / sqrt(m F_Q).
    """
    return np.diag([0.0, -1.0, 1.0, 0.0]).astype(complex)


def qfi(rho, generator=None):
    """Quantum Fisher information of ``rho`` for unitary phase imprinting by ``generator``.

    F_Q = 2 sum_ij (l_i - l_j)^2 / (l_i + l_j) |<psi_i|H|psi_j>|^2, over pairs
    with l_i + l_j > 1e-12.
    """
    h = relative_phase_generator() if generator is None else np.asarray(generator, dtype=complex)
    w, v = hermitian_eig(rho)
    w = _clamped(w, "density matrix")
    hm = v.conj().T @ h @ v
    total = 0.0
    n = w.size
    for i in range(n):
        for j in range(n):
            s = w[i] + w[j]
            if s > PAIR_TOL:
                total += 2.0 * (w[i] - w[j]) ** 2 / s * abs(hm[i, j]) ** 2
    return float(total)


def variance(psi, generator=None):
    """Var(H) of a pure state; its QFI is 4 Var(H)."""
    h = relative_phase_generator() if generator is None else np.asarray(generator, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    mean = np.vdot(psi, h @ psi).real
    mean_sq = np.vdot(psi, h @ h @ psi).real
    return float(mean_sq - mean**2)
