"""Reference scenarios: degenerate vs detuned, constant vs Gaussian vs kicked.

Each builder returns ``(SystemSpec, GridSpec)``. ``CORPUS`` maps names to
builders and is what the test-suite and demos iterate over.
"""

from __future__ import annotations

import math

import numpy as np

from .matcore import SIGMA_X, SIGMA_Y
from .propagate import GridSpec
from .system import BasisSpec, CouplingTerm, Envelope, KickSpec, SystemSpec

DEGENERATE = (0.0, 0.0)
DETUNED = (0.0, 1.0)


def two_level(energies, envelope, w=SIGMA_X, kicks=()):
    terms = [CouplingTerm(envelope, w)] if envelope is not None else []
    return SystemSpec(BasisSpec(("1", "2"), energies), terms, kicks)


def degenerate_constant():
    return two_level(DEGENERATE, Envelope.constant(0.25)), GridSpec(0.0, math.pi, 32)


def degenerate_gaussian():
    return two_level(DEGENERATE, Envelope.gaussian(0.2, 5.0, 1.0)), GridSpec(0.0, 10.0, 64)


def degenerate_kick():
    kick = KickSpec(2.5, math.pi / 4, SIGMA_X)
    return two_level(DEGENERATE, Envelope.constant(0.1), kicks=[kick]), GridSpec(0.0, 5.0, 64)


def detuned_constant(amplitude=0.2, detuning=1.0):
    """The benchmark: E = (0, δ), constant coupling on [0, 5]."""
    return two_level((0.0, detuning), Envelope.constant(amplitude)), GridSpec(0.0, 5.0, 64)


def detuned_gaussian(detuning=1.0):
    return two_level((0.0, detuning), Envelope.gaussian(0.2, 5.0, 1.0)), GridSpec(0.0, 10.0, 64)


def detuned_kick():
    kick = KickSpec(2.5, math.pi / 4, SIGMA_X)
    return two_level(DETUNED, Envelope.constant(0.1), kicks=[kick]), GridSpec(0.0, 5.0, 64)


def kick_transfer(theta=math.pi / 2):
    """Pure kick at t = 1, observed until t = 11."""
    kick = KickSpec(1.0, theta, SIGMA_X)
    return two_level(DEGENERATE, None, kicks=[kick]), GridSpec(0.0, 11.0, 64)


def rectangular_transfer():
    """Square pulse of phase area π/2 lasting 0.1, observed for 10x its duration."""
    tau = 0.1
    env = Envelope.rectangular((math.pi / 2) / tau, 1.0, 1.0 + tau)
    return two_level(DEGENERATE, env), GridSpec(0.0, 2.0, 200)


def noncommuting_kicks():
    """Degenerate levels, but two kicks about different axes: ordering survives."""
    kicks = [KickSpec(1.0, 0.6, SIGMA_X), KickSpec(2.0, 0.9, SIGMA_Y)]
    return two_level(DEGENERATE, None, kicks=kicks), GridSpec(0.0, 3.0, 16)


def three_level_ladder():
    w = np.array([[0, 1, 0], [1, 0, 0.7], [0, 0.7, 0]], dtype=complex)
    tab = Envelope.tabulated([1.0, 3.0, 4.0, 6.0], [0.0, 0.25, 0.25, 0.0])
    return SystemSpec(BasisSpec(("g", "m", "e"), (0.0, 0.8, 2.1)), [CouplingTerm(tab, w)]), GridSpec(0.0, 7.0, 70)


CORPUS = {
    "degenerate_constant": degenerate_constant,
    "degenerate_gaussian": degenerate_gaussian,
    "degenerate_kick": degenerate_kick,
    "detuned_constant": detuned_constant,
    "detuned_gaussian": detuned_gaussian,
    "detuned_kick": detuned_kick,
    "kick_transfer": kick_transfer,
    "rectangular_transfer": rectangular_transfer,
    "noncommuting_kicks": noncommuting_kicks,
    "three_level_ladder": three_level_ladder,
}
