"""Synthetic Si(111)-film dielectric tensors.

These are hand-made oscillator fits, not first-principles data. They only
reproduce the qualitative ordering expected for 12-plane Si(111) films:

* ``bulk_like``: isotropic single Lorentz oscillator, static value 11.66.
* ``passivated_like``: uniaxial, slightly below bulk at every xi; the gap
  widening from confinement pushes the resonances up, so the deficit is
  largest at low xi.
* ``reconstructed_like``: biaxial, bulk plus low-energy surface-state
  oscillators, strongest along the dimer chains (y).
"""
from __future__ import annotations

from .dielectric import DielectricTensorModel, Oscillator, OscillatorSet
from .reflection import Film

__all__ = [
    "PASSIVATED_THICKNESS_NM",
    "RECONSTRUCTED_THICKNESS_NM",
    "bulk_like",
    "passivated_like",
    "reconstructed_like",
    "sample_film",
]

#: 12 atomic planes, ideal/H-terminated surfaces.
PASSIVATED_THICKNESS_NM = 1.9
#: 12 atomic planes with 2x1 reconstructed surfaces.
RECONSTRUCTED_THICKNESS_NM = 1.7

_BULK = Oscillator(11.1, 3.4, 0.0)


def bulk_like() -> DielectricTensorModel:
    return DielectricTensorModel.isotropic(OscillatorSet((_BULK,)))


def passivated_like() -> DielectricTensorModel:
    parallel = OscillatorSet((Oscillator(11.1, 3.55, 0.0),))
    perpendicular = OscillatorSet((Oscillator(10.6, 3.6, 0.0),))
    return DielectricTensorModel.uniaxial(parallel, perpendicular)


def reconstructed_like() -> DielectricTensorModel:
    return DielectricTensorModel(
        xx=OscillatorSet((_BULK, Oscillator(1.2, 0.8, 0.1))),
        yy=OscillatorSet((_BULK, Oscillator(2.4, 0.7, 0.1))),
        zz=OscillatorSet((_BULK, Oscillator(0.6, 0.9, 0.1))),
    )


def sample_film(kind: str, thickness: float | None = None) -> Film:
    """Film for one of ``"bulk"``, ``"passivated"``, ``"reconstructed"``.

    Bulk films default to the passivated thickness.
    """
    if kind == "passivated":
        return Film(thickness or PASSIVATED_THICKNESS_NM, passivated_like())
    if kind == "reconstructed":
        return Film(thickness or RECONSTRUCTED_THICKNESS_NM, reconstructed_like())
    if kind == "bulk":
        return Film(thickness or PASSIVATED_THICKNESS_NM, bulk_like())
    raise ValueError(f"unknown sample film {kind!r}")
