"""Compiled inner loops. Summation order is fixed: row n outer, column m inner."""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True, nogil=True)
def ordered_sum(terms):
    acc = 0j
    n_rows, n_cols = terms.shape
    for i in range(n_rows):
        for j in range(n_cols):
            acc += terms[i, j]
    return acc


@njit(cache=True, nogil=True, parallel=True)
def sum_over_receivers(weights, xs, ys, rx_points, target, cell_half_alpha, rx_half_alpha, k):
    """Coherent cell sum for many receiver positions.

    ``weights`` already holds Gamma times the transmit leg of every cell. Each
    receiver is aimed at ``target``. Receivers are independent, so the outer
    loop may run in parallel without changing any per-receiver result.
    """
    n_pts = rx_points.shape[0]
    out = np.empty(n_pts, dtype=np.complex128)
    n_rows, n_cols = weights.shape
    for p in prange(n_pts):
        px = rx_points[p, 0]
        py = rx_points[p, 1]
        pz = rx_points[p, 2]
        ax = target[0] - px
        ay = target[1] - py
        az = target[2] - pz
        a_norm = math.sqrt(ax * ax + ay * ay + az * az)
        acc = 0j
        for i in range(n_rows):
            by = ys[i] - py
            for j in range(n_cols):
                bx = xs[j] - px
                r = math.sqrt(bx * bx + by * by + pz * pz)
                c_cell = pz / r
                c_ant = (ax * bx + ay * by - az * pz) / (a_norm * r)
                f = 0.0
                if c_cell >= 0.0 and c_ant >= 0.0:
                    f = c_cell ** cell_half_alpha * c_ant ** rx_half_alpha
                kr = k * r
                acc += weights[i, j] * (f / r) * complex(math.cos(kr), -math.sin(kr))
        out[p] = acc
    return out
