"""Mapping of a chain Hamiltonian onto an evanescently coupled waveguide array.

The main chain (levels 1 and 3) becomes a straight array of waveguides with
spacings fixed by the exponential coupling law J = chi * exp(-alpha * d); the
level-2 sites are side waveguides hanging off the level-3 guides.  The Fock
ladder n*omega1 is realised as a transverse index gradient set by the bend
radius, omega1 = 2*pi*n_s*a / (R*lambda).
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .model import BasisState, ChainBasis, ModelParams


class CouplingDomainError(ValueError):
    """Requested coupling is not reachable with the given coupling law."""


@dataclass(frozen=True)
class CouplingLaw:
    chi: float
    alpha: float

    def __post_init__(self):
        if not (self.chi > 0 and self.alpha > 0):
            raise ValueError(f"chi and alpha must be > 0, got chi={self.chi}, alpha={self.alpha}")

    def coupling(self, d: float) -> float:
        return self.chi * math.exp(-self.alpha * d)


@dataclass(frozen=True)
class Link:
    site_a: int
    site_b: int
    J: float
    kind: str  # "main" or "side"


@dataclass(frozen=True)
class SideLink:
    site: int  # main-array waveguide index (0-based) the side guide couples to
    strength: float
    spacing: float


@dataclass(frozen=True)
class WaveguideLayout:
    spacings: list
    side_links: list
    bend_radius: float
    chi: float
    alpha: float
    n_s: float
    a: float
    wavelength: float
    site_detunings: list
    side_detunings: list

    def __post_init__(self):
        if any(d < 0 for d in self.spacings) or any(s.spacing < 0 for s in self.side_links):
            raise ValueError("waveguide spacings must be non-negative")
        if self.bend_radius <= 0:
            raise ValueError("bend radius must be > 0")

    def to_dict(self) -> dict:
        return {
            "spacings": list(self.spacings),
            "side_links": [asdict(s) for s in self.side_links],
            "bend_radius": self.bend_radius,
            "chi": self.chi,
            "alpha": self.alpha,
            "n_s": self.n_s,
            "a": self.a,
            "lambda": self.wavelength,
            "site_detunings": list(self.site_detunings),
            "side_detunings": list(self.side_detunings),
            "units": {
                "spacings": "transverse length, inverse units of alpha",
                "bend_radius": "same length unit as a and lambda",
                "couplings": "1/propagation length, units of chi",
                "detunings": "propagation-constant offsets, units of chi",
                "site": "0-based index into the main waveguide array",
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def coupling_sequence(params: ModelParams, basis: ChainBasis) -> list:
    """Nonzero chain links in chain order: g1*sqrt(n) main links, g2eff side links."""
    if not len(basis):
        raise ValueError("empty basis")
    links = []
    for i, s in enumerate(basis.states):
        if s.level == 3:
            j = basis.locate(BasisState(2, s.n, params.kappa + 1))
            if j is not None and params.g2eff > 0:
                links.append(Link(i, j, params.g2eff, "side"))
        if s.level in (1, 3):
            partner = 3 if s.level == 1 else 1
            j = basis.locate(BasisState(partner, s.n + 1, params.kappa))
            if j is not None and params.g1 > 0:
                links.append(Link(i, j, params.g1_link(s.n, s.n + 1), "main"))
    return links


def spacing_from_coupling(J: float, law: CouplingLaw) -> float:
    """Separation d with chi * exp(-alpha * d) = J."""
    if not J > 0:
        raise CouplingDomainError(f"coupling must be > 0, got {J}")
    if J > law.chi:
        raise CouplingDomainError(f"coupling {J} exceeds the law maximum chi={law.chi}")
    return math.log(law.chi / J) / law.alpha


def bend_radius(omega1_target: float, n_s: float, a: float, wavelength: float) -> float:
    """R = 2*pi*n_s*a / (omega1 * lambda)."""
    for name, v in (("omega1", omega1_target), ("n_s", n_s), ("a", a), ("lambda", wavelength)):
        if not v > 0:
            raise ValueError(f"{name} must be > 0, got {v}")
    return 2 * math.pi * n_s * a / (omega1_target * wavelength)


def gradient_from_bend(R: float, n_s: float, a: float, wavelength: float) -> float:
    """Index-gradient frequency omega1 = 2*pi*n_s*a / (R * lambda)."""
    return 2 * math.pi * n_s * a / (R * wavelength)


def export_layout(
    params: ModelParams,
    basis: ChainBasis,
    law: CouplingLaw,
    optics: tuple,
    omega1_scale: float = 1.0,
) -> WaveguideLayout:
    """Waveguide geometry realising the chain Hamiltonian.

    ``optics`` is ``(n_s, a, lambda)``.  Model quantities are in units of omega1;
    ``omega1_scale`` is omega1 in the inverse propagation-length unit of ``chi``,
    so a model coupling g maps to J = g * omega1_scale.
    """
    n_s, a, wavelength = optics
    main_sites = [i for i, s in enumerate(basis.states) if s.level in (1, 3)]
    main_pos = {site: p for p, site in enumerate(main_sites)}
    spacings, side_links, bad = [], [], []
    for link in coupling_sequence(params, basis):
        J = link.J * omega1_scale
        try:
            d = spacing_from_coupling(J, law)
        except CouplingDomainError as exc:
            bad.append(f"{link.kind} link {basis.states[link.site_a]}-{basis.states[link.site_b]} ({exc})")
            continue
        if link.kind == "main":
            spacings.append(d)
        else:
            side_links.append(SideLink(main_pos[link.site_a], J, d))
    if bad:
        raise CouplingDomainError("unrealisable couplings: " + "; ".join(bad))
    ref = basis.states[main_sites[0]] if main_sites else basis.seed
    e_ref = params.site_energy(ref)
    site_det = [(params.site_energy(basis.states[i]) - e_ref) * omega1_scale for i in main_sites]
    side_det = [
        (params.site_energy(s) - e_ref) * omega1_scale for s in basis.states if s.level == 2
    ]
    return WaveguideLayout(
        spacings=spacings,
        side_links=side_links,
        bend_radius=bend_radius(params.omega1 * omega1_scale, n_s, a, wavelength),
        chi=law.chi,
        alpha=law.alpha,
        n_s=n_s,
        a=a,
        wavelength=wavelength,
        site_detunings=site_det,
        side_detunings=side_det,
    )
