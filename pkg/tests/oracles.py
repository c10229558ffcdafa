"""Independent reference computations used as test oracles.

These are written with plain loops and the math module so they share no
code with the vectorised implementation under test.
"""

import cmath
import math


def cell_centres(rows, cols, dx, dy):
    """Yield (n, m, x, y) in row-major order, n and m starting at 1 - size/2."""
    for n in range(1 - rows // 2, rows // 2 + 1):
        for m in range(1 - cols // 2, cols // 2 + 1):
            yield n, m, (m - 0.5) * dx, (n - 0.5) * dy


def spherical(d, theta, phi):
    return (d * math.sin(theta) * math.cos(phi), d * math.sin(theta) * math.sin(phi), d * math.cos(theta))


def cos_pattern(alpha, theta):
    if theta > math.pi / 2:
        return 0.0
    return max(math.cos(theta), 0.0) ** alpha


def angle_between(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return math.acos(max(-1.0, min(1.0, dot / (nu * nv))))


def general_power(rows, cols, dx, dy, lam, amp, phases, cell_alpha, tx, rx,
                  tx_alpha, rx_alpha, gt, gr, p_t=1.0, tx_aim=(0.0, 0.0, 0.0), rx_aim=(0.0, 0.0, 0.0)):
    """Direct per-cell evaluation of the coherent received-power sum.

    ``phases`` is indexed [row][col] with row 0 at n = 1 - N/2.
    """
    k = 2 * math.pi / lam
    g_cell = 2 * (cell_alpha + 1)
    total = 0j
    for n, m, x, y in cell_centres(rows, cols, dx, dy):
        i, j = n - (1 - rows // 2), m - (1 - cols // 2)
        rt = math.dist(tx, (x, y, 0.0))
        rr = math.dist(rx, (x, y, 0.0))
        th_t = math.acos(tx[2] / rt)
        th_r = math.acos(rx[2] / rr)
        th_tx = angle_between([a - b for a, b in zip(tx_aim, tx)], [x - tx[0], y - tx[1], -tx[2]])
        th_rx = angle_between([a - b for a, b in zip(rx_aim, rx)], [x - rx[0], y - rx[1], -rx[2]])
        f = (cos_pattern(tx_alpha, th_tx) * cos_pattern(cell_alpha, th_t)
             * cos_pattern(cell_alpha, th_r) * cos_pattern(rx_alpha, th_rx))
        gamma = amp * cmath.exp(1j * phases[i][j])
        total += math.sqrt(f) * gamma / (rt * rr) * cmath.exp(-1j * k * (rt + rr))
    return p_t * gt * gr * g_cell * dx * dy * lam ** 2 / (64 * math.pi ** 3) * abs(total) ** 2


def geometric_sum(rows, cols, u, v):
    """sum over cells of exp(j((m - 1/2) u + (n - 1/2) v)) by direct summation."""
    total = 0j
    for n in range(1 - rows // 2, rows // 2 + 1):
        for m in range(1 - cols // 2, cols // 2 + 1):
            total += cmath.exp(1j * ((m - 0.5) * u + (n - 0.5) * v))
    return total


def friis_image_power(p_t, gt, gr, lam, amp, d1, d2):
    """Free-space link of length d1 + d2 scaled by the reflection amplitude."""
    return p_t * gt * gr * (lam / (4 * math.pi * (d1 + d2))) ** 2 * amp ** 2


def farfield_power(p_t, gt, gr, cell_alpha, dx, dy, lam, amp, rows, cols, d1, d2, theta_t, theta_r, beta):
    g_cell = 2 * (cell_alpha + 1)
    return (p_t * gt * gr * g_cell * dx * dy * lam ** 2 * math.cos(theta_t) ** cell_alpha
            * math.cos(theta_r) ** cell_alpha * amp ** 2 * beta ** 2
            / (64 * math.pi ** 3 * d1 ** 2 * d2 ** 2))


def gain_midpoint(alpha, samples=200_000):
    """4 pi / (2 pi * int_0^{pi/2} cos^alpha sin) by the midpoint rule."""
    h = (math.pi / 2) / samples
    s = sum(math.cos((i + 0.5) * h) ** alpha * math.sin((i + 0.5) * h) for i in range(samples)) * h
    return 2.0 / s
