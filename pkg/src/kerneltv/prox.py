"""Proximal maps for the saddle-point solver.

All maps act in the L2(mu) geometry with the uniform cell measure
mu(cell) = h^2 = cell_area; every formula below is the standard one with
norms taken against that measure.  The fidelity term enters through its
convex conjugate: with g = K*f the primal fidelity is

    G(z) = lam * ||z - g||_p^q,

and the dual update needs prox of sigma*G^*.  The four exponent pairs:

    (1,1)  G*(psi) = <g,psi> + indicator{|psi| <= lam pointwise}
           -> clip(y - sigma*g, -lam, lam)
    (2,2)  G*(psi) = <g,psi> + ||psi||_2^2 / (4 lam)
           -> (y - sigma*g) / (1 + sigma/(2 lam))
    (2,1)  G*(psi) = <g,psi> + indicator{||psi||_2 <= lam}
           -> L2-ball projection of (y - sigma*g)
    (1,2)  G*(psi) = <g,psi> + ||psi||_inf^2 / (4 lam)
           -> clamp of (y - sigma*g) at a level found by sorted
              water-filling.

The TV dual variable is projected onto the pointwise l2 unit ball.
"""

from __future__ import annotations

import numpy as np


def proj_unit_ball(wx: np.ndarray, wy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise projection onto {|w| <= 1} with l2 magnitude."""
    mag = np.hypot(wx, wy)
    scale = 1.0 / np.maximum(1.0, mag)
    return wx * scale, wy * scale


def clamp_level_l1sq(absz_flat: np.ndarray, lam: float, sigma: float,
                     cell_area: float) -> float:
    """Clamp level m* for prox of sigma * (<g,.> + ||.||_inf^2/(4 lam)).

    m* is the unique root of  m/(2 lam) = (h^2/sigma) * sum (|z| - m)_+ ,
    found exactly by sorting |z| (water-filling).
    """
    a = np.sort(absz_flat)[::-1]
    if a.size == 0 or a[0] <= 0.0:
        return 0.0
    s = np.cumsum(a)
    k = np.arange(1, a.size + 1)
    c = sigma / (2.0 * lam * cell_area)
    m_cand = s / (c + k)
    # valid bracket: a[k] <= m_cand[k-1] <= a[k-1]; monotone, so unique
    a_next = np.append(a[1:], 0.0)
    valid = (m_cand <= a) & (m_cand >= a_next)
    idx = int(np.argmax(valid))
    return float(m_cand[idx])


def make_fidelity_dual_prox(p: int, q: int, lam: float, g: np.ndarray,
                            cell_area: float):
    """Return psi_new = prox_{sigma G*}(y) as a closure over (p, q, lam, g)."""
    if (p, q) == (1, 1):
        def prox(y, sigma):
            return np.clip(y - sigma * g, -lam, lam)
    elif (p, q) == (2, 2):
        def prox(y, sigma):
            return (y - sigma * g) / (1.0 + sigma / (2.0 * lam))
    elif (p, q) == (2, 1):
        def prox(y, sigma):
            z = y - sigma * g
            norm = np.sqrt((z ** 2).sum() * cell_area)
            if norm > lam:
                z = z * (lam / norm)
            return z
    elif (p, q) == (1, 2):
        def prox(y, sigma):
            z = y - sigma * g
            m = clamp_level_l1sq(np.abs(z).ravel(), lam, sigma, cell_area)
            return np.clip(z, -m, m)
    else:
        raise ValueError(f"unsupported exponents ({p}, {q})")
    return prox


def fidelity_conjugate(psi: np.ndarray, p: int, q: int, lam: float,
                       g: np.ndarray, cell_area: float) -> float:
    """G*(psi); assumes psi is feasible for the indicator parts (it is
    after the corresponding prox)."""
    pairing = float((g * psi).sum() * cell_area)
    if q == 1:
        return pairing
    if p == 2:
        return pairing + float((psi ** 2).sum() * cell_area) / (4.0 * lam)
    return pairing + float(np.abs(psi).max() ** 2) / (4.0 * lam)


def proj_group_l1_ball(wx: np.ndarray, wy: np.ndarray, radius: float,
                       cell_area: float) -> tuple[np.ndarray, np.ndarray]:
    """Projection onto {h^2 * sum_c |w_c|_2 <= radius} (group l1 ball).

    Shrinks the pointwise magnitudes by the soft threshold that lands the
    weighted magnitude sum exactly on the radius.
    """
    mag = np.hypot(wx, wy)
    total = mag.sum() * cell_area
    if total <= radius:
        return wx, wy
    a = np.sort(mag.ravel())[::-1]
    s = np.cumsum(a)
    k = np.arange(1, a.size + 1)
    theta_cand = (s - radius / cell_area) / k
    valid = a > theta_cand
    k_star = int(np.nonzero(valid)[0][-1])
    theta = float(theta_cand[k_star])
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.where(mag > theta, (mag - theta) / mag, 0.0)
    return wx * factor, wy * factor
