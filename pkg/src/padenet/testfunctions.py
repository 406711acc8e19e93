"""Named test functions with known poles.

``exfun`` has 40 poles (35 distinct): five double poles on ``|z| = 0.8``,
twenty simple poles on ``|z| = 0.7`` and ``|z| = 0.9``, and ten simple poles
on ``|z| = 1.2``, all divided into ``cos z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkit
from .errors import ValidationError

__all__ = [
    "EXFUN_N",
    "EXFUN_RHO",
    "EXFUN_BOUND",
    "EXFUN_LOCATIONS",
    "exfun_poles",
    "exfun",
    "RationalFunction",
    "random_rational",
    "simple_pole",
    "GENERATORS",
]

EXFUN_N = 150
EXFUN_RHO = 0.99
EXFUN_BOUND = 70

# activation pole locations used with exfun
EXFUN_LOCATIONS = {
    1: complex(-0.3, 35 / 30),
    2: complex(1.43, -0.2),
    3: complex(-1.1, -7 / 6),
}


def exfun_poles():
    """``(location, multiplicity)`` pairs; inner poles first."""
    out = []
    for j in range(1, 6):
        out.append((0.8 * np.exp(1j * np.pi * j / 5), 2))
    for j in range(1, 11):
        out.append((0.7 * np.exp(1j * np.pi * j / 10), 1))
    for j in range(11, 21):
        out.append((-0.9 * np.exp(1j * np.pi * j / 10), 1))
    for j in range(1, 4):
        out.append((1.2 * np.exp(1j * np.pi * (j + 5) / 10), 1))
    for j in range(4, 7):
        out.append((-1.2 * np.exp(1j * np.pi * (j + 5) / 10), 1))
    # j - 5 rather than j + 5: the latter repeats the first three outer poles
    for j in range(7, 11):
        out.append((1.2 * np.exp(-1j * np.pi * (j - 5) / 10), 1))
    return [(complex(z), m) for z, m in out]


def exfun(z):
    """``cos z`` over the product of ``(z - pole)**multiplicity``."""
    z = np.asarray(z, dtype=np.complex128)
    den = np.ones_like(z)
    for s, m in exfun_poles():
        den = den * (z - s) ** m
    return np.cos(z) / den


@dataclass(frozen=True)
class RationalFunction:
    """``f(z) = const + sum_k residues[k] / (z - poles[k])``."""

    poles: np.ndarray
    residues: np.ndarray
    const: complex = 0j

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.const, dtype=np.complex128)
        for s, r in zip(self.poles, self.residues):
            out = out + r / (z - s)
        return out


def random_rational(rng, max_outer=3, max_inner=3, outer=(1.1, 3.0), inner=(0.3, 0.9),
                    min_separation=0.2):
    """Proper rational function with simple poles in two radial bands.

    Poles are kept ``min_separation`` apart so the poles are well separated
    relative to the sampling resolution.
    """
    n_out = int(rng.integers(0, max_outer + 1))
    n_in = int(rng.integers(0 if n_out else 1, max_inner + 1))
    poles = []
    for count, (lo, hi) in ((n_out, outer), (n_in, inner)):
        placed = 0
        while placed < count:
            s = rng.uniform(lo, hi) * np.exp(2j * np.pi * rng.uniform())
            if all(abs(s - t) >= min_separation for t in poles):
                poles.append(s)
                placed += 1
    residues = (rng.uniform(0.5, 1.5, len(poles)) * np.exp(2j * np.pi * rng.uniform(size=len(poles))))
    const = complex(rng.normal(), rng.normal())
    return RationalFunction(np.array(poles), residues, const)


def simple_pole(s):
    s = complex(s)
    if s == 0:
        raise ValidationError("pole must be nonzero")
    return lambda z: 1.0 / (np.asarray(z, dtype=np.complex128) - s)


GENERATORS = {
    "exfun": exfun,
    "pole2": simple_pole(2.0),
    "pole05": simple_pole(0.5),
    "two_poles": lambda z: simple_pole(2.0)(z) + simple_pole(0.5)(z),
    "exp_pole": lambda z: np.exp(z) / (np.asarray(z, dtype=np.complex128) - 1.5),
}


def poly_of_poles(poles):
    return numkit.poly_from_roots([s for s, m in poles for _ in range(m)])
