"""Adaptive Dormand-Prince 5(4) integration for complex-valued linear ODEs."""

from dataclasses import dataclass

import numpy as np

from ..errors import StiffnessError

# Dormand & Prince (1980) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

# PI controller (Hairer, Norsett & Wanner II, IV.2)
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0


@dataclass
class OdeSolution:
    t: np.ndarray
    y: np.ndarray  # shape (len(t), n)
    n_accepted: int = 0
    n_rejected: int = 0
    n_rhs: int = 0


def _error_norm(err, y_old, y_new, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(rhs, t0, y0, f0, rel_tol, abs_tol, span):
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    f1 = rhs(t0 + h0, y0 + h0 * f0)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, span)


def integrate_adaptive(rhs, y0, t_samples, rel_tol=1e-8, abs_tol=1e-12, t0=None, max_steps=None):
    """Integrate ``dy/dt = rhs(t, y)`` and report ``y`` at ``t_samples``.

    Steps are clipped so that every requested sample time is hit exactly.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> dy/dt`` for a complex vector ``y``.
    y0 : array_like
        State at ``t0``.
    t_samples : array_like
        Strictly increasing output times, all ``>= t0``.
    rel_tol, abs_tol : float
        Local error tolerances of the embedded 5(4) estimate.
    t0 : float, optional
        Initial time; defaults to ``t_samples[0]``.
    max_steps : int, optional
        Abort with :class:`StiffnessError` after this many attempted steps.

    Returns
    -------
    OdeSolution
    """
    t_samples = np.asarray(t_samples, dtype=float)
    if t_samples.ndim != 1 or t_samples.size == 0:
        raise ValueError("t_samples must be a non-empty 1-d sequence")
    if np.any(np.diff(t_samples) <= 0):
        raise ValueError("t_samples must be strictly increasing")
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    t = float(t_samples[0] if t0 is None else t0)
    if t_samples[0] < t:
        raise ValueError("sample times precede the initial time")

    y = np.array(y0, dtype=complex).ravel()
    out = np.empty((t_samples.size, y.size), dtype=complex)
    span = float(t_samples[-1] - t)
    h_min = 1e-6 * span

    f = np.asarray(rhs(t, y), dtype=complex)
    n_rhs = 1
    idx = 0
    while idx < t_samples.size and t_samples[idx] == t:
        out[idx] = y
        idx += 1
    if idx == t_samples.size:
        return OdeSolution(t_samples, out, 0, 0, n_rhs)

    h = _initial_step(rhs, t, y, f, rel_tol, abs_tol, span)
    n_rhs += 1
    err_prev = 1e-4
    accepted = rejected = 0
    k = np.empty((7, y.size), dtype=complex)

    while idx < t_samples.size:
        target = t_samples[idx]
        hitting = t + h >= target
        step = target - t if hitting else h
        k[0] = f
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(1, 7):
                yi = y + step * np.dot(_A[i], k[:i])
                k[i] = rhs(t + _C[i] * step, yi)
            y_new = y + step * (_B5 @ k)
            err = _error_norm(step * (_E @ k), y, y_new, rel_tol, abs_tol)
        n_rhs += 6
        if not np.isfinite(err):
            err = np.inf

        if err <= 1.0:
            t = target if hitting else t + step
            y = y_new
            f = k[6]  # FSAL
            accepted += 1
            if hitting:
                out[idx] = y
                idx += 1
            err = max(err, 1e-10)
            fac = _SAFETY * err ** (-_ALPHA) * err_prev ** _BETA
            err_prev = err
            # a clipped step says nothing about the controller's preferred size
            h_next = step * min(_FAC_MAX, max(_FAC_MIN, fac))
            h = max(h, h_next) if hitting else h_next
        else:
            rejected += 1
            fac = max(_FAC_MIN, _SAFETY * err ** (-1 / 5))
            h = step * fac
            if h < h_min:
                raise StiffnessError(
                    f"step size underflow at t={t:.6e}: h={h:.3e} < {h_min:.3e} "
                    f"(accepted {accepted}, rejected {rejected})",
                    t=t,
                    step=h,
                )
        if max_steps is not None and accepted + rejected > max_steps:
            raise StiffnessError(f"exceeded {max_steps} steps at t={t:.6e}", t=t, step=h)

    return OdeSolution(t_samples, out, accepted, rejected, n_rhs)
