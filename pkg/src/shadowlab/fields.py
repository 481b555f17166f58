"""Displacement fields and cutoff flows.

Two kinds of identity-isotopic perturbations are supported:

* parametric fields (trigonometric sums, radial bumps) whose sup-norm and
  Lipschitz constants follow analytically from their coefficients; a
  Lipschitz bound < 1 certifies that x -> x + u(x) is a homeomorphism;

* time-1 maps of cutoff vector fields, integrated with RK4.  These are
  homeomorphisms because flows are, independent of any Lipschitz bound;
  the reverse-time integration supplies the inverse, and `roundtrip_error`
  audits the integration accuracy.
"""

import numpy as np

from .eigen import HyperbolicMatrix, matrix_log

_J = np.array([[0.0, -1.0], [1.0, 0.0]])

# quintic smoothstep; max slope 15/8
_SMOOTH_MAX_SLOPE = 1.875
# max |d/drho (1 - rho^2)^3| over [0, 1]
_BUMP_MAX_SLOPE = 6.0 * (1 / np.sqrt(5.0)) * (1 - 0.2) ** 2


def smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


def fall(t):
    """1 for t <= 0, 0 for t >= 1, quintic in between."""
    return 1.0 - smoothstep(t)


def bump(rho):
    """(1 - rho^2)^3 on [0, 1), 0 outside."""
    r2 = np.clip(np.asarray(rho, dtype=float) ** 2, 0.0, 1.0)
    return (1.0 - r2) ** 3


class TrigField:
    """Doubly periodic field  u(x) = sum_j amp_j * sin(2 pi k_j . x + phase_j).

    amps: (m, 2) coefficient vectors; waves: (m, 2) integer frequency rows;
    phases: (m,).  Periodicity u(x + n) = u(x) holds for integer n by
    construction.
    """

    def __init__(self, amps, waves, phases=None):
        self.amps = np.atleast_2d(np.asarray(amps, dtype=float))
        self.waves = np.atleast_2d(np.asarray(waves, dtype=float))
        if not np.allclose(self.waves, np.round(self.waves)):
            raise ValueError("wave vectors must be integer for periodicity")
        m = self.amps.shape[0]
        self.phases = np.zeros(m) if phases is None else np.asarray(phases, dtype=float)
        if self.waves.shape != (m, 2) or self.phases.shape != (m,):
            raise ValueError("inconsistent coefficient shapes")

    def displacement(self, pts):
        pts = np.asarray(pts, dtype=float)
        args = 2.0 * np.pi * (pts @ self.waves.T) + self.phases
        return np.sin(args) @ self.amps

    def sup_bound(self):
        return float(np.sum(np.linalg.norm(self.amps, axis=1)))

    def eta_sup_bound(self, eta):
        return float(np.sum(np.abs(self.amps @ np.asarray(eta, dtype=float))))

    def lip_bound(self):
        return float(np.sum(
            2.0 * np.pi * np.linalg.norm(self.amps, axis=1)
            * np.linalg.norm(self.waves, axis=1)))


class RadialBumpField:
    """amp * bump(|x - center| / radius): a compactly supported plane field."""

    def __init__(self, center, radius, amp):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.amp = np.asarray(amp, dtype=float)

    def displacement(self, pts):
        pts = np.asarray(pts, dtype=float)
        d = pts - self.center
        rho = np.linalg.norm(d, axis=-1) / self.radius
        return bump(rho)[..., None] * self.amp

    def sup_bound(self):
        return float(np.linalg.norm(self.amp))

    def eta_sup_bound(self, eta):
        return float(abs(np.asarray(eta, dtype=float) @ self.amp))

    def lip_bound(self):
        return float(np.linalg.norm(self.amp) * _BUMP_MAX_SLOPE / self.radius)


class SumField:
    """Pointwise sum of fields sharing the displacement interface."""

    def __init__(self, parts):
        self.parts = list(parts)

    def displacement(self, pts):
        pts = np.asarray(pts, dtype=float)
        total = np.zeros_like(pts)
        for f in self.parts:
            total = total + f.displacement(pts)
        return total

    def sup_bound(self):
        return sum(f.sup_bound() for f in self.parts)

    def eta_sup_bound(self, eta):
        return sum(f.eta_sup_bound(eta) for f in self.parts)

    def lip_bound(self):
        return sum(f.lip_bound() for f in self.parts)


def rk4_flow(field, pts, t_end=1.0, steps=128):
    """Integrate dx/dt = field(x) from each point; deterministic RK4."""
    x = np.array(pts, dtype=float, copy=True)
    h = t_end / steps
    for _ in range(steps):
        k1 = field(x)
        k2 = field(x + 0.5 * h * k1)
        k3 = field(x + 0.5 * h * k2)
        k4 = field(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


class FlowMap:
    """Time-1 map of a vector field with reverse-time inverse."""

    def __init__(self, field_fn, steps=128):
        self.field_fn = field_fn
        self.steps = steps

    def forward(self, pts):
        return rk4_flow(self.field_fn, pts, 1.0, self.steps)

    def inverse(self, pts):
        return rk4_flow(lambda x: -self.field_fn(x), pts, 1.0, self.steps)

    def displacement(self, pts):
        pts = np.asarray(pts, dtype=float)
        return self.forward(pts) - pts

    def roundtrip_error(self, pts):
        pts = np.asarray(pts, dtype=float)
        back = self.inverse(self.forward(pts))
        return float(np.max(np.linalg.norm(back - pts, axis=-1)))


class ContractionFlow(FlowMap):
    """Cutoff linearization flow around a fixed point of the model matrix.

    The field is  -fall((rho(x) - r_on)/(r_off - r_on)) * log(M) x  with
    rho the sup-norm in eigen-coordinates.  Where rho <= r_on the time-1 map
    equals M^{-1}, so composing with the model map yields the identity on
    the disk rho <= r_on / lambda.  Trajectories never leave rho <= r_off.
    """

    def __init__(self, hm: HyperbolicMatrix, r_on, r_off, steps=192):
        if not 0 < r_on < r_off:
            raise ValueError("need 0 < r_on < r_off")
        self.hm = hm
        self.r_on = float(r_on)
        self.r_off = float(r_off)
        L = matrix_log(hm)
        etas = np.vstack([hm.eta_u, hm.eta_s])

        def field(x):
            rho = np.max(np.abs(x @ etas.T), axis=-1)
            c = fall((rho - self.r_on) / (self.r_off - self.r_on))
            return -c[..., None] * (x @ L.T)

        super().__init__(field, steps=steps)

    def eta_sup_bound(self, eta):
        # |eta . displacement| <= int |eta(field)| <= log(lambda) * r_off
        # in eigen-coordinates; convert the requested covector via duality.
        lam = self.hm.lambda_
        eta = np.asarray(eta, dtype=float)
        cu = abs(eta @ self.hm.e_u)
        cs = abs(eta @ self.hm.e_s)
        return float(np.log(lam) * self.r_off * (cu + cs) * 1.05 + 1e-9)

    def sup_bound(self):
        lam = self.hm.lambda_
        basis = np.column_stack([self.hm.e_u, self.hm.e_s])
        return float(np.log(lam) * self.r_off * 2.0 * np.linalg.norm(basis, 2) * 1.05 + 1e-9)


class RotationFlow(FlowMap):
    """Cutoff rigid rotation supported in a round disk.

    The field omega * bump(|x - c|/r) * J(x - c) is tangent to circles
    around c, so the support disk is invariant under the time-1 map.
    """

    def __init__(self, center, radius, omega, steps=128):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.omega = float(omega)

        def field(x):
            d = x - self.center
            rho = np.linalg.norm(d, axis=-1) / self.radius
            return self.omega * bump(rho)[..., None] * (d @ _J.T)

        super().__init__(field, steps=steps)

    def sup_bound(self):
        return abs(self.omega) * self.radius

    def eta_sup_bound(self, eta):
        return abs(self.omega) * self.radius * float(np.linalg.norm(eta))
