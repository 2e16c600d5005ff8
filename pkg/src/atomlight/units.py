"""Unit system shared by every module.

Everything downstream is expressed in natural units with the atomic
transition wave number and the single-atom free-space decay rate set to
one: lengths in 1/k0, rates and frequencies in Gamma0.  SI prefactors
(mu0, epsilon0, hbar) cancel in all observables and never appear.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class UnitSystem:
    """Natural units: k0 = Gamma0 = 1, lambda0 = 2*pi/k0."""

    k0: float = 1.0
    gamma0: float = 1.0
    lambda0: float = field(init=False)

    def __post_init__(self):
        if self.k0 <= 0 or self.gamma0 <= 0:
            raise ValueError("k0 and gamma0 must be positive")
        object.__setattr__(self, "lambda0", 2.0 * np.pi / self.k0)


UNITS = UnitSystem()
