"""Formulation tags and material parameters shared by the solver layers.

Dirichlet single-unknown equations (density q = normal derivative):
    OUT1    S q                        = u_inc
    OUT2    S-dot q                    = u_inc-dot
    OUT2_5  (D^T)^- q                  = du_inc/dn
    OUT3    (D^T)^- q + S-dot q / c    = du_inc/dn + u_inc-dot / c
    OUT4    OUT3 + alpha S q           = ... + alpha u_inc

Transmission systems couple (u, q) (ordinary) or (u-dot, q) (modified);
the modified ones use only the potentials whose time-discretised symbols
stay root-free in the upper half plane: S-dot, D traces, D^T traces, and
the time-integrated hypersingular operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = ["Formulation", "MaterialParams", "MaterialPair"]


class Formulation(Enum):
    OUT1 = "out1"
    OUT2 = "out2"
    OUT2_5 = "out2_5"
    OUT3 = "out3"
    OUT4 = "out4"
    PMCHWT = "pmchwt"
    MUELLER = "mueller"
    BM = "bm"
    STANDARD = "standard"
    PMCHWT_MOD = "pmchwt_mod"
    MUELLER_MOD = "mueller_mod"
    BM_MOD = "bm_mod"
    STANDARD_MOD = "standard_mod"

    @property
    def is_dirichlet(self) -> bool:
        return self in _DIRICHLET

    @property
    def is_transmission(self) -> bool:
        return not self.is_dirichlet

    @property
    def is_modified(self) -> bool:
        return self in _MODIFIED

    @property
    def has_char_series(self) -> bool:
        """Whether a mode-wise characteristic function exists here.

        Ordinary transmission formulations contain the hypersingular or
        time-differentiated double-layer operators, whose piecewise-linear
        lattice series do not converge absolutely; they get no series.
        """
        return self.is_dirichlet or self.is_modified

    @classmethod
    def from_name(cls, name: str) -> "Formulation":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown formulation {name!r}; one of: {valid}") from None


_DIRICHLET = {
    Formulation.OUT1,
    Formulation.OUT2,
    Formulation.OUT2_5,
    Formulation.OUT3,
    Formulation.OUT4,
}
_MODIFIED = {
    Formulation.PMCHWT_MOD,
    Formulation.MUELLER_MOD,
    Formulation.BM_MOD,
    Formulation.STANDARD_MOD,
}


@dataclass(frozen=True)
class MaterialParams:
    """Shear modulus and density of one domain; wave speed c = sqrt(s/rho)."""

    s: float = 1.0
    rho: float = 1.0

    def __post_init__(self):
        if self.s <= 0 or self.rho <= 0:
            raise ValueError("shear modulus and density must be positive")

    @property
    def c(self) -> float:
        return math.sqrt(self.s / self.rho)


@dataclass(frozen=True)
class MaterialPair:
    """Exterior (1) and interior (2) domain materials."""

    exterior: MaterialParams = MaterialParams(1.0, 1.0)
    interior: MaterialParams = MaterialParams(0.2, 0.37)

    @property
    def s1(self) -> float:
        return self.exterior.s

    @property
    def s2(self) -> float:
        return self.interior.s

    @property
    def c1(self) -> float:
        return self.exterior.c

    @property
    def c2(self) -> float:
        return self.interior.c
