"""Single-particle physics of the odd-site alternating-bond chain.

Sites are labelled 1..2L+1.  Odd-even bonds (1,2), (3,4), ... carry the weak
amplitude ``t_prime``; even-odd bonds (2,3), (4,5), ... carry the strong
amplitude ``t``.  The chain is spin independent, so one spinless matrix is
stored and every level is understood to be two-fold spin degenerate.

With an odd number of sites the staggered sign flip ``psi_n -> (-1)^n psi_n``
maps an eigenstate of energy ``e`` to one of energy ``-e``, so nonzero levels
come in +/- pairs and one unpaired zero-energy level is forced.  Its
wavefunction lives on odd sites only and decays geometrically with ratio
``-t_prime/t`` from site 1:

    psi(2n+1) = sqrt((1 - r^2) / (1 - r^(2L+2))) * (-r)^n,   r = t_prime/t

The conduction/valence levels are

    e(k) = +/- sqrt((t - t_prime)^2 + 4 t t_prime cos^2(pi k / (2L+2)))

for k = 1..L, which leaves a gap around the mid-gap zero mode that approaches
|t - t_prime| (half the full band gap 2|t - t_prime|) from above as L grows.
The functions here report finite-size values; the asymptote is only quoted in
documentation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class WireParams:
    """Chain geometry and hopping amplitudes."""

    num_sites: int
    t: float = 1.0
    t_prime: float = 0.5

    def __post_init__(self):
        if int(self.num_sites) != self.num_sites or self.num_sites < 3 or self.num_sites % 2 == 0:
            raise ValueError("num_sites must be odd and >= 3")
        if not (np.isfinite(self.t) and self.t > 0):
            raise ValueError("t must be positive")
        if not (np.isfinite(self.t_prime) and self.t_prime >= 0):
            raise ValueError("t_prime must be >= 0")

    @property
    def half_length(self) -> int:
        """L with num_sites = 2L + 1."""
        return (self.num_sites - 1) // 2


@dataclass(frozen=True)
class SingleParticleLevel:
    energy: float
    amplitudes: np.ndarray = field(repr=False)
    band_index: int | str = 0
    delocalized: bool = False


def build_hamiltonian(params: WireParams) -> np.ndarray:
    """Real symmetric tridiagonal hopping matrix (spinless; degeneracy 2)."""
    n = params.num_sites
    hop = np.empty(n - 1)
    hop[0::2] = params.t_prime  # bonds (2m-1, 2m), 1-based
    hop[1::2] = params.t        # bonds (2m, 2m+1)
    return np.diag(hop, 1) + np.diag(hop, -1)


def analytic_spectrum(params: WireParams) -> np.ndarray:
    """All 2L+1 energies in closed form, sorted ascending (one exact zero)."""
    L = params.half_length
    t, tp = params.t, params.t_prime
    k = np.arange(1, L + 1)
    band = np.sqrt((t - tp) ** 2 + 4 * t * tp * np.cos(np.pi * k / (2 * L + 2)) ** 2)
    return np.sort(np.concatenate([-band, [0.0], band]))


def numerical_spectrum(params: WireParams) -> np.ndarray:
    """Eigenvalues of the hopping matrix; oracle for the closed form."""
    return np.linalg.eigvalsh(build_hamiltonian(params))


def zero_mode(params: WireParams) -> SingleParticleLevel:
    """The mid-gap zero-energy level, localized at site 1 when t_prime < t.

    At t_prime = t the gap closes and the state delocalizes (uniform weight on
    odd sites); the returned level then carries ``delocalized=True``.
    """
    L = params.half_length
    r = params.t_prime / params.t
    n = np.arange(L + 1)
    amps = np.zeros(params.num_sites)
    if r <= 1.0:
        amps[0::2] = (-r) ** n
    else:
        # same ray rescaled by r^-L so long chains cannot overflow
        amps[0::2] = (-1.0) ** n * (1.0 / r) ** (L - n)
    amps /= np.linalg.norm(amps)
    gap_closed = abs(params.t - params.t_prime) < 1e-12 * params.t
    return SingleParticleLevel(0.0, amps, band_index="zero-mode", delocalized=gap_closed)


def band_gap(params: WireParams) -> float:
    """Smallest |e| over the nonzero levels (finite-size value)."""
    L = params.half_length
    t, tp = params.t, params.t_prime
    return float(np.sqrt((t - tp) ** 2 + 4 * t * tp * np.cos(np.pi * L / (2 * L + 2)) ** 2))


def _csv(lines: list[str]) -> str:
    buf = io.StringIO()
    for line in lines:
        buf.write(line)
        buf.write("\n")
    return buf.getvalue()


def spectrum_csv(params: WireParams) -> str:
    """`index,energy` rows of the closed-form spectrum, 15 significant digits."""
    lines = ["index,energy"]
    for i, e in enumerate(analytic_spectrum(params)):
        lines.append(f"{i},{e:.15g}")
    return _csv(lines)


def zeromode_density_csv(params: WireParams) -> str:
    """`site,density` rows (1-based sites) of the zero-mode probability density."""
    level = zero_mode(params)
    lines = ["site,density"]
    for site, a in enumerate(level.amplitudes, start=1):
        lines.append(f"{site},{a * a:.15g}")
    return _csv(lines)
