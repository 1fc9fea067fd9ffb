"""Spherical Bessel ratios via the logarithmic derivative.

For the longitudinal wavevector of a Drude metal below the plasma frequency
``k_L r`` is almost purely imaginary and reaches several hundred for
realistic radii, where ``j_l`` itself overflows. The ratio
``j_l(z) / (z j_l'(z))`` only needs ``d_l = j_l'/j_l``, which is computed by
the downward recurrence

    d_{n-1} = (n - 1)/z - 1 / (d_n + (n + 1)/z)

started well above the requested order, as in BHMIE-style Mie codes.

The recurrence needs about ``|z|`` steps. For very large, strongly
imaginary arguments (huge spheres) ``j_l`` is instead a single Hankel
function up to a relative error ``exp(-2 |Im z|)``, and its finite
closed form gives ``d_l`` directly.
"""

import math

from ..errors import BesselPoleError

MAX_ORDER = 60
#: beyond this |z| the Hankel form is used when |Im z| is large enough
RECURRENCE_LIMIT = 2000
HANKEL_MIN_IMAG = 40.0


def _hankel_log_derivative(l, z):
    """d/dz log h_l(z) for the Hankel function that grows with |Im z|.

    h_l(z) is proportional to exp(-+ i z) / z * sum_k c_k (+-i / (2 z))^k with
    c_k = (l + k)! / (k! (l - k)!), the sign chosen so that the exponential grows.
    """
    sign = -1.0 if z.imag > 0 else 1.0
    x = sign * 1j / (2.0 * z)
    s = 0j
    ds = 0j
    c = 1.0
    for k in range(l + 1):
        if k:
            c *= (l + k) * (l - k + 1) / k
        s += c * x**k
        # d/dz x^k = -k x^k / z
        ds -= k * c * x**k / z
    return sign * 1j - 1.0 / z + ds / s


def log_derivative(l, z, extra=20):
    """``j_l'(z) / j_l(z)`` by downward recurrence."""
    if l < 0 or l > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {l}")
    z = complex(z)
    if z == 0:
        raise ValueError("argument must be non-zero")
    if abs(z) > RECURRENCE_LIMIT and abs(z.imag) > HANKEL_MIN_IMAG:
        return _hankel_log_derivative(l, z)
    start = l + extra + math.ceil(abs(z))
    d = (start + 1) / z
    for n in range(start, l, -1):
        d = (n - 1) / z - 1.0 / (d + (n + 1) / z)
    return d


def bessel_log_ratio(l, z):
    """Return ``j_l(z) / (z j_l'(z))`` for ``1 <= l <= 60`` and complex ``z != 0``."""
    if l < 1:
        raise ValueError(f"order must be >= 1, got {l}")
    z = complex(z)
    zd = z * log_derivative(l, z)
    if abs(zd) < 1e-300:
        raise BesselPoleError(f"z = {z} is at a zero of j_{l}'")
    return 1.0 / zd
