"""Face diffusivities for the two-point flux.

Arithmetic and harmonic means act on the neighbouring k values, the
integral mean on the neighbouring p values. The SAM coefficients express
the shock-cell fluxes as an equivalent face diffusivity on spacing dx.
"""

import numpy as np

from .model import coefficient, phi

ARITHMETIC = 0
HARMONIC = 1
INTEGRAL = 2

AVERAGE_KINDS = {"arithmetic": ARITHMETIC, "harmonic": HARMONIC, "integral": INTEGRAL}


def arithmetic_average(kL, kR):
    return 0.5 * (kL + kR)


def harmonic_average(kL, kR):
    """2 kL kR / (kL + kR), taken as 0 when both are 0."""
    if np.ndim(kL) == 0 and np.ndim(kR) == 0:
        s = kL + kR
        return 0.0 if s == 0 else 2.0 * kL * kR / s
    kL, kR = np.broadcast_arrays(np.asarray(kL, float), np.asarray(kR, float))
    s = kL + kR
    out = np.zeros_like(s)
    nz = s != 0
    out[nz] = 2.0 * kL[nz] * kR[nz] / s[nz]
    return out


def integral_average(pL, pR, model):
    """(Phi(pR) - Phi(pL)) / (pR - pL).

    Values on one side of p_star give that side's coefficient exactly
    (no cancellation in the difference quotient).
    """
    ps = model.p_star
    if np.ndim(pL) == 0 and np.ndim(pR) == 0:
        if (pL >= ps) == (pR >= ps):
            return coefficient(pL, model)
        return (phi(pR, model) - phi(pL, model)) / (pR - pL)
    pL, pR = np.broadcast_arrays(np.asarray(pL, float), np.asarray(pR, float))
    out = np.asarray(coefficient(pL, model), dtype=float).copy()
    ok = (pL >= ps) != (pR >= ps)
    out[ok] = (phi(pR[ok], model) - phi(pL[ok], model)) / (pR[ok] - pL[ok])
    return out


def face_coefficients(p, kind, model):
    """Coefficient at each of the len(p) - 1 faces for an averaging kind."""
    p = np.asarray(p, dtype=float)
    kind = AVERAGE_KINDS.get(kind, kind)
    if kind == INTEGRAL:
        return integral_average(p[:-1], p[1:], model)
    k = coefficient(p, model)
    if kind == ARITHMETIC:
        return arithmetic_average(k[:-1], k[1:])
    if kind == HARMONIC:
        return harmonic_average(k[:-1], k[1:])
    raise ValueError(f"unknown averaging kind {kind!r}")


def sam_face_coefficients(pL, pR, dx, dx_star, model):
    """Equivalent face diffusivities (k_plus, k_minus) of the shock fluxes.

    k_plus reproduces F+ = -k_max (p* - pL)/dx_star and k_minus reproduces
    F- = -k_min (pR - p*)/(dx - dx_star) in the form -k (pR - pL)/dx.
    """
    if not 0 < dx_star < dx:
        raise ValueError("dx_star must lie strictly inside (0, dx); apply the guard first")
    if pL == pR:
        raise ValueError("pL and pR must differ")
    ps = model.p_star
    k_plus = model.k_max * (dx / dx_star) * (ps - pL) / (pR - pL)
    k_minus = model.k_min * (dx / (dx - dx_star)) * (pR - ps) / (pR - pL)
    return k_plus, k_minus


def sam_fluxes(pL, pR, dx, dx_star, model, right_dist=None):
    """Shock fluxes (F_plus at the left cell, F_minus at the right cell).

    right_dist overrides the distance dx - dx_star used in F_minus.
    """
    ps = model.p_star
    if right_dist is None:
        right_dist = dx - dx_star
    f_plus = -model.k_max * (ps - pL) / dx_star
    f_minus = -model.k_min * (pR - ps) / right_dist
    return f_plus, f_minus
