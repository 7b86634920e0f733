# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled farm interaction kernel.

Same contract as ``_interaction_py.unit_power_grid``: the 3N-DOF motion
system decouples into three N x N complex systems per frequency, each
factorized once by LAPACK zgesv and solved against all direction
right-hand sides.  The system matrix is symmetric, so passing the
C-ordered buffer to the Fortran routine solves the identical system.
"""

import numpy as np

from libc.math cimport cos, sin, exp, sqrt
from scipy.linalg.cython_lapack cimport zgesv
from scipy.special.cython_special cimport j0

BACKEND_NAME = "cython"


def unit_power_grid(double[:, ::1] positions, double[::1] omega,
                    double[::1] wavenumber, double[:, ::1] added_mass,
                    double[:, ::1] damping, double[:, ::1] excitation,
                    double[::1] beta, double mass, double[::1] pto_stiffness,
                    double[::1] pto_damping, double attenuation_scale,
                    bint couple):
    cdef int n = positions.shape[0]
    cdef int n_w = omega.shape[0]
    cdef int n_b = beta.shape[0]
    cdef int w, b, d, i, jj, info

    out_arr = np.zeros((n_w, n_b, n), dtype=np.float64)
    dist_arr = np.zeros((n, n), dtype=np.float64)
    taper_arr = np.ones((n, n), dtype=np.float64)
    shape_arr = np.zeros((n, n), dtype=np.float64)
    z_arr = np.zeros((n, n), dtype=np.complex128)
    rhs_arr = np.zeros((n_b, n), dtype=np.complex128)
    phase_arr = np.zeros((n_b, n), dtype=np.complex128)
    ipiv_arr = np.zeros(n, dtype=np.int32)
    cos_b = np.cos(np.asarray(beta))
    sin_b = np.sin(np.asarray(beta))

    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] dist = dist_arr
    cdef double[:, ::1] taper = taper_arr
    cdef double[:, ::1] shape = shape_arr
    cdef double complex[:, ::1] z = z_arr
    cdef double complex[:, ::1] rhs = rhs_arr
    cdef double complex[:, ::1] phase = phase_arr
    cdef int[::1] ipiv = ipiv_arr
    cdef double[::1] cb = cos_b
    cdef double[::1] sb = sin_b

    cdef double dx, dy, r, k, wv, diag_re, off, ph, mag, p, scale
    cdef double complex diag

    for i in range(n):
        for jj in range(n):
            dx = positions[i, 0] - positions[jj, 0]
            dy = positions[i, 1] - positions[jj, 1]
            r = sqrt(dx * dx + dy * dy)
            dist[i, jj] = r
            if attenuation_scale > 0:
                taper[i, jj] = exp(-(r / attenuation_scale) * (r / attenuation_scale))

    for w in range(n_w):
        k = wavenumber[w]
        wv = omega[w]
        if couple:
            for i in range(n):
                for jj in range(n):
                    shape[i, jj] = j0(k * dist[i, jj]) * taper[i, jj]
        else:
            for i in range(n):
                for jj in range(n):
                    shape[i, jj] = 1.0 if i == jj else 0.0

        # Phases relative to buoy 0 (see the NumPy twin for rationale).
        for b in range(n_b):
            for i in range(n):
                ph = k * ((positions[i, 0] - positions[0, 0]) * cb[b]
                          + (positions[i, 1] - positions[0, 1]) * sb[b])
                phase[b, i] = cos(ph) + 1j * sin(ph)

        for d in range(3):
            diag_re = -wv * wv * (mass + added_mass[w, d]) + pto_stiffness[d]
            diag = diag_re + 1j * wv * pto_damping[d]
            off = wv * damping[w, d]
            for i in range(n):
                for jj in range(n):
                    z[i, jj] = 1j * (off * shape[i, jj])
                z[i, i] = z[i, i] + diag

            mag = excitation[w, d]
            for b in range(n_b):
                for i in range(n):
                    rhs[b, i] = mag * phase[b, i]

            # zgesv wants column-major storage; z is symmetric and rhs is
            # laid out with buoys contiguous, so the C buffers fit as-is.
            zgesv(&n, &n_b, &z[0, 0], &n, &ipiv[0], &rhs[0, 0], &n, &info)
            if info != 0:
                raise np.linalg.LinAlgError(
                    f"singular interaction system at omega={wv} (dof {d}, info {info})")

            scale = 0.5 * pto_damping[d] * wv * wv
            for b in range(n_b):
                for i in range(n):
                    p = rhs[b, i].real * rhs[b, i].real + rhs[b, i].imag * rhs[b, i].imag
                    out[w, b, i] += scale * p

    return out_arr
