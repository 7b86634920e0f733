"""NumPy implementation of the farm interaction kernel.

Computes, for every (frequency, direction) node of a spectral grid, the
power each buoy absorbs from a unit-amplitude regular wave.  Because the
added mass, damping and PTO matrices couple like DOFs only, the 3N x 3N
motion system splits into three independent N x N complex systems which
are solved as one batched call.

The compiled twin in ``_interaction_cy`` implements exactly the same
contract; ``backend.py`` picks one at import time.
"""

from __future__ import annotations

import numpy as np
from scipy.special import j0

BACKEND_NAME = "python"


def unit_power_grid(positions, omega, wavenumber, added_mass, damping,
                    excitation, beta, mass, pto_stiffness, pto_damping,
                    attenuation_scale, couple):
    """Per-buoy absorbed power at every spectral node, unit wave amplitude.

    Parameters
    ----------
    positions : (n, 2) float array, buoy coordinates in metres.
    omega : (n_w,) grid frequencies, rad/s.
    wavenumber : (n_w,) deep-water wavenumbers omega^2/g.
    added_mass, damping, excitation : (n_w, 3) interpolated table columns.
    beta : (n_b,) wave directions, rad.
    mass : buoy mass, kg.
    pto_stiffness, pto_damping : (3,) per-DOF PTO constants.
    attenuation_scale : Gaussian coupling taper length in metres
        (<= 0 disables the taper).
    couple : bool, False zeroes all off-diagonal damping.

    Returns
    -------
    (n_w, n_b, n) array of non-negative powers in watts.

    Notes
    -----
    Excitation phases are referenced to the first buoy so a single-buoy
    farm reproduces the isolated-buoy computation bit for bit.
    """
    pos = np.asarray(positions, dtype=float)
    n = pos.shape[0]
    n_w = omega.shape[0]
    n_b = beta.shape[0]

    # Like-DOF coupling matrix per frequency: damping * J0(k d) with an
    # optional Gaussian distance taper.  J0(0) = 1 reproduces the diagonal.
    delta = pos[:, None, :] - pos[None, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    if couple:
        shape = j0(wavenumber[:, None, None] * dist[None, :, :])
        if attenuation_scale > 0:
            shape = shape * np.exp(-((dist / attenuation_scale) ** 2))[None, :, :]
    else:
        shape = np.broadcast_to(np.eye(n), (n_w, n, n)).copy()

    eye = np.eye(n)
    # Z[w, d] = (-w^2 (m + A) + K) I + i w (D I + B J)
    stiff = (-(omega[:, None] ** 2) * (mass + added_mass) + pto_stiffness[None, :])
    z = (stiff[:, :, None, None] * eye[None, None, :, :]
         + 1j * omega[:, None, None, None]
         * (pto_damping[None, :, None, None] * eye[None, None, :, :]
            + damping[:, :, None, None] * shape[:, None, :, :]))

    # Plane-wave phases relative to buoy 0.
    rel = pos - pos[0]
    proj = rel[:, 0][None, :] * np.cos(beta)[:, None] + rel[:, 1][None, :] * np.sin(beta)[:, None]
    phase = np.exp(1j * wavenumber[:, None, None] * proj[None, :, :])  # (n_w, n_b, n)
    rhs = excitation[:, :, None, None] * phase[:, None, :, :]          # (n_w, 3, n_b, n)

    x = np.linalg.solve(z, rhs.swapaxes(2, 3))                         # (n_w, 3, n, n_b)
    speed_sq = np.abs(x) ** 2 * (omega[:, None, None, None] ** 2)
    power = 0.5 * np.einsum("d,wdnb->wbn", pto_damping, speed_sq)
    return power
