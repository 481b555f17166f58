"""Hot loops for the torus model.

The expanding/contracting series behind the semiconjugacy is evaluated over
large sample batches.  `trig_series` is the numba build (trigonometric
perturbations, fixed-point orbit inversion); `series_numpy` is the
vectorized pure-numpy path that additionally accepts arbitrary python
displacement callables.  Both return the displacement w = P - id.
"""

import numpy as np

from .accel import njit


@njit(cache=True)
def _trig_u(y, amps, waves, phases, out):
    n = y.shape[0]
    m = amps.shape[0]
    for i in range(n):
        ux = 0.0
        uy = 0.0
        for j in range(m):
            s = np.sin(2.0 * np.pi * (waves[j, 0] * y[i, 0] + waves[j, 1] * y[i, 1])
                       + phases[j])
            ux += amps[j, 0] * s
            uy += amps[j, 1] * s
        out[i, 0] = ux
        out[i, 1] = uy


@njit(cache=True)
def trig_series(pts, mat, imat, amps, waves, phases,
                mu_u, mu_s, eta_u, eta_s, e_u, e_s, ku, ks, fp_iters):
    n = pts.shape[0]
    w = np.zeros((n, 2))
    u = np.empty((n, 2))

    # forward sum: w_u = sum_k mu_u^-(k+1) eta_u(u(F^k x))
    y = pts.copy()
    cu = np.zeros(n)
    coef = 1.0 / mu_u
    for _ in range(ku):
        _trig_u(y, amps, waves, phases, u)
        for i in range(n):
            cu[i] += coef * (eta_u[0] * u[i, 0] + eta_u[1] * u[i, 1])
        coef /= mu_u
        for i in range(n):
            fx = mat[0, 0] * y[i, 0] + mat[0, 1] * y[i, 1] + u[i, 0]
            fy = mat[1, 0] * y[i, 0] + mat[1, 1] * y[i, 1] + u[i, 1]
            y[i, 0] = fx
            y[i, 1] = fy

    # backward sum: w_s = -sum_{k>=1} mu_s^{k-1} eta_s(u(F^-k x))
    y = pts.copy()
    cs = np.zeros(n)
    coef = 1.0
    z = np.empty((n, 2))
    for _ in range(ks):
        # solve F(z) = y by fixed point z <- A^-1 (y - u(z))
        for i in range(n):
            z[i, 0] = imat[0, 0] * y[i, 0] + imat[0, 1] * y[i, 1]
            z[i, 1] = imat[1, 0] * y[i, 0] + imat[1, 1] * y[i, 1]
        for _ in range(fp_iters):
            _trig_u(z, amps, waves, phases, u)
            moved = 0.0
            for i in range(n):
                rx = y[i, 0] - u[i, 0]
                ry = y[i, 1] - u[i, 1]
                zx = imat[0, 0] * rx + imat[0, 1] * ry
                zy = imat[1, 0] * rx + imat[1, 1] * ry
                moved = max(moved, abs(zx - z[i, 0]) + abs(zy - z[i, 1]))
                z[i, 0] = zx
                z[i, 1] = zy
            if moved < 1e-15:
                break
        _trig_u(z, amps, waves, phases, u)
        for i in range(n):
            cs[i] -= coef * (eta_s[0] * u[i, 0] + eta_s[1] * u[i, 1])
        coef *= mu_s
        for i in range(n):
            y[i, 0] = z[i, 0]
            y[i, 1] = z[i, 1]

    for i in range(n):
        w[i, 0] = cu[i] * e_u[0] + cs[i] * e_s[0]
        w[i, 1] = cu[i] * e_u[1] + cs[i] * e_s[1]
    return w


def series_numpy(pts, mat, displacement, inverse_step,
                 mu_u, mu_s, eta_u, eta_s, e_u, e_s, ku, ks):
    """Vectorized series evaluation; inverse_step(y) must solve F(z) = y."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]
    cu = np.zeros(n)
    y = pts.copy()
    coef = 1.0 / mu_u
    for _ in range(ku):
        u = displacement(y)
        cu += coef * (u @ eta_u)
        coef /= mu_u
        y = y @ mat.T + u

    cs = np.zeros(n)
    y = pts.copy()
    coef = 1.0
    for _ in range(ks):
        y = inverse_step(y)
        cs -= coef * (displacement(y) @ eta_s)
        coef *= mu_s

    return cu[:, None] * e_u + cs[:, None] * e_s
