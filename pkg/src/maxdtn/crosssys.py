"""Closed-form solver for the algebraic cross-product system.

With psi0 = rho*nu - beta, the system in (a, b) is

    psi0 x a - z*mu0*b = a#,
    psi0 x b + z*eps0*a = b#,
    nu x a = g,

where <beta,nu> = <g,nu> = 0 and rho^2 + r0 = z^2*eps0*mu0.  The tangential
part of a is -nu x g; the normal component and b follow in closed form.
nu x b has its own cancellation-free closed form because the transport
recursion consumes it directly.

All operations are ring-generic: components may be scalars, numpy arrays
(batched), or jets.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateRho
from .numerics import cross, dot, vadd, vscale, vsub


class CrossSystemInput:
    """Validated input bundle for the cross-product system.

    Validation is performed on numeric values only (batched arrays included);
    jet-valued inputs are accepted as-is since the recursion guarantees the
    orthogonality constraints structurally.
    """

    __slots__ = ("rho", "nu", "beta", "z", "eps0", "mu0", "a_sharp", "b_sharp", "g")

    def __init__(self, rho, nu, beta, z, eps0, mu0, a_sharp, b_sharp, g):
        self.rho = rho
        self.nu = nu
        self.beta = beta
        self.z = z
        self.eps0 = eps0
        self.mu0 = mu0
        self.a_sharp = a_sharp
        self.b_sharp = b_sharp
        self.g = g
        self._validate()

    def _validate(self):
        def numeric(v):
            return isinstance(v, (int, float, complex, np.number, np.ndarray))

        if all(numeric(c) for c in self.nu):
            if np.any(np.abs(np.asarray(self.rho)) < 1e-14):
                raise DegenerateRho("|rho| below 1e-14")
            scale_b = max(1.0, float(np.max(np.abs(np.asarray(self.beta)))))
            bn = dot(self.beta, self.nu)
            if np.max(np.abs(np.asarray(bn))) > 1e-13 * scale_b:
                raise ValueError("<beta,nu> != 0: input rejected, not projected")
            if all(numeric(c) for c in self.g):
                scale_g = max(1.0, float(np.max(np.abs(np.asarray(self.g)))))
                gn = dot(self.g, self.nu)
                if np.max(np.abs(np.asarray(gn))) > 1e-13 * scale_g:
                    raise ValueError("<g,nu> != 0: input rejected, not projected")


def solve_cross_system(inp: CrossSystemInput):
    """Return (a, b, nu_cross_b) solving the system.

    nu_cross_b is computed from its own closed form rather than as
    cross(nu, b), avoiding a cancellation-prone product at large |rho|.
    """
    rho, nu, beta = inp.rho, inp.nu, inp.beta
    z, mu0 = inp.z, inp.mu0
    a_sharp, b_sharp, g = inp.a_sharp, inp.b_sharp, inp.g

    inv_rho = 1.0 / rho if not hasattr(rho, "invert") else rho.invert()
    inv_rho2 = inv_rho * inv_rho
    zmu = z * mu0
    inv_zmu = 1.0 / zmu if not hasattr(zmu, "invert") else zmu.invert()

    nu_x_g = cross(nu, g)
    # normal component of a
    nu_a = (inv_rho * dot(nu, cross(beta, g))
            - inv_rho2 * dot(cross(beta, a_sharp), nu)
            + (zmu * inv_rho2) * dot(b_sharp, nu))
    a = vadd(vscale(-1.0, nu_x_g), vscale(nu_a, nu))

    psi0 = vsub(vscale(rho, nu), beta)
    b = vscale(inv_zmu, vsub(cross(psi0, a), a_sharp))

    # z*mu0 * (nu x b) = rho*(nu x g) - <nu,a>*beta - nu x a#
    nu_cross_b = vscale(inv_zmu, vsub(vsub(vscale(rho, nu_x_g), vscale(nu_a, beta)),
                                      cross(nu, a_sharp)))
    return a, b, nu_cross_b
