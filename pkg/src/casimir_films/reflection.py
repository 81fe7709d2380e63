"""Reflection matrices of free-standing films at imaginary frequency.

Conventions
-----------
Wavenumbers are in nm^-1 and frequencies in eV; ``q = xi / hbar c`` is the
vacuum wavenumber belonging to ``xi``. The film fills ``-d < z < 0`` with
vacuum on both sides and is probed from ``z > 0``. Fields vary as
``exp(i k.r_par)``, and at imaginary frequency a gap mode is ``exp(+kappa z)``
(moving toward the film) or ``exp(-kappa z)`` (moving away from it).

Reflection matrices act on ``(E_s, H_s)``, the components of E and
``Z0 * H`` along ``s = z x k_hat``. In this basis TE reflects with the usual
Fresnel sign (negative for a dielectric), TM is positive, and an ideal
mirror is ``diag(-1, 1)``. The same ``s`` is used for both propagation
directions, so the lab-frame matrix does not depend on the film
orientation except through the dielectric tensor.

Everything stays real: with ``eps >= 1`` every square root argument is
positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dielectric import DielectricTensorModel, eval_tensor

__all__ = [
    "HBAR_C_EV_NM",
    "HALF_SPACE",
    "Film",
    "PerfectMirror",
    "ReflectionError",
    "slab_reflection_isotropic",
    "slab_reflection_uniaxial",
    "slab_reflection_biaxial",
    "reflection",
    "mirror_flip",
]

HBAR_C_EV_NM = 197.3269804

#: Thickness marker for a semi-infinite medium.
HALF_SPACE = float("inf")


class ReflectionError(ArithmeticError):
    """Evaluation outside the domain or a degenerate mode structure."""


@dataclass(frozen=True)
class Film:
    """Homogeneous slab. ``thickness`` in nm (``HALF_SPACE`` for a half-space),
    ``orientation`` is the angle of the film's y-axis from the lab y-axis."""

    thickness: float
    tensor: DielectricTensorModel
    orientation: float = 0.0

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError("thickness must be positive")
        if not isinstance(self.tensor, DielectricTensorModel):
            raise TypeError("tensor must be a DielectricTensorModel")
        if not np.isfinite(self.orientation):
            raise ValueError("orientation must be finite")
        object.__setattr__(self, "orientation", float(self.orientation) % (2 * np.pi))

    @property
    def is_half_space(self) -> bool:
        return self.thickness == HALF_SPACE

    @property
    def azimuthally_symmetric(self) -> bool:
        return self.tensor.classification != "biaxial"


@dataclass(frozen=True)
class PerfectMirror:
    """Unit reflectivity in both polarizations. Used to check the
    integration against closed-form Casimir results."""

    azimuthally_symmetric = True


def _wavenumbers(xi, k):
    xi = np.asarray(xi, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any(xi < 0) or np.any(k < 0):
        raise ReflectionError("xi and k must be non-negative")
    if np.any((xi == 0) & (k == 0)):
        raise ReflectionError("xi = k = 0 is outside the domain (kappa undefined)")
    q = xi / HBAR_C_EV_NM
    return q, k


def _airy(r01, kz, d):
    """Slab reflection from the interface coefficient (decaying exponentials only)."""
    d = np.asarray(d, dtype=float)
    if np.all(np.isinf(d)):
        return r01
    # exp(-inf) = 0 already gives the half-space value
    decay = np.exp(-2.0 * kz * d)
    return r01 * (1.0 - decay) / (1.0 - r01 * r01 * decay)


def _check_eps(*values):
    for v in values:
        if np.any(np.asarray(v) < 1):
            raise ReflectionError("dielectric values must be >= 1 on the imaginary axis")


def slab_reflection_isotropic(eps, d, xi, k):
    """``(r_TE, r_TM)`` of an isotropic slab of thickness ``d`` (nm, or
    ``HALF_SPACE``) at imaginary frequency ``xi`` (eV) and in-plane
    wavenumber ``k`` (nm^-1)."""
    _check_eps(eps)
    q, k = _wavenumbers(xi, k)
    k2 = k * k
    q2 = q * q
    kappa = np.sqrt(k2 + q2)
    kz = np.sqrt(k2 + eps * q2)
    r_te = (kappa - kz) / (kappa + kz)
    r_tm = (eps * kappa - kz) / (eps * kappa + kz)
    return _airy(r_te, kz, d), _airy(r_tm, kz, d)


def slab_reflection_uniaxial(eps_par, eps_perp, d, xi, k):
    """Uniaxial slab with the optic axis along the surface normal.

    TE sees only ``eps_par``; TM propagates with the extraordinary
    ``kappa_e = sqrt(eps_par / eps_perp * k**2 + eps_par * q**2)``.
    """
    _check_eps(eps_par, eps_perp)
    q, k = _wavenumbers(xi, k)
    k2 = k * k
    q2 = q * q
    kappa = np.sqrt(k2 + q2)
    kz_o = np.sqrt(k2 + eps_par * q2)
    kz_e = np.sqrt(eps_par / eps_perp * k2 + eps_par * q2)
    r_te = (kappa - kz_o) / (kappa + kz_o)
    r_tm = (eps_par * kappa - kz_e) / (eps_par * kappa + kz_e)
    return _airy(r_te, kz_o, d), _airy(r_tm, kz_e, d)


def _modes(ekk, eks, ess, ezz, q2, k2):
    """Film eigenmodes for state ``(E_k, E_s, G, F)`` with ``G = H_s / q`` and
    ``F = q H_k``. Returns ``(lam, vec)``: lam has shape (..., 2) (the positive
    roots; the negative ones are ``-lam``), vec shape (..., 2, 4, 2) indexed by
    [sign (+, -), component, mode (TM-like, TE-like)].

    The first-order system is ``psi1' = B psi2``, ``psi2' = C psi1`` with
    ``psi1 = (E_k, E_s)``, ``psi2 = (G, F)``, so ``lam**2`` are the
    eigenvalues of the 2x2 matrix ``B C``.
    """
    b00 = -(q2 + k2 / ezz)
    c00 = -ekk
    c01 = -eks
    c10 = q2 * eks
    c11 = q2 * ess + k2
    # B C (B is diagonal with B11 = 1)
    a = b00 * c00
    b = b00 * c01
    c = c10
    dd = c11

    h = 0.5 * (a - dd)
    sign = np.where(h >= 0, 1.0, -1.0)
    disc2 = h * h + b * c
    if np.any(disc2 < -1e-12 * (a * a + dd * dd)):
        raise ReflectionError("complex mode wavenumbers: non-physical dielectric tensor")
    disc = np.sqrt(np.maximum(disc2, 0.0))
    mean = 0.5 * (a + dd)
    mu_tm = mean + sign * disc
    mu_te = mean - sign * disc
    if np.any(mu_te <= 0) or np.any(mu_tm <= 0):
        raise ReflectionError("non-positive squared mode wavenumber")

    v_tm = _eigvec(a, b, c, dd, mu_tm, np.array([1.0, 0.0]))
    v_te = _eigvec(a, b, c, dd, mu_te, np.array([0.0, 1.0]))
    overlap = np.abs(v_tm[..., 0] * v_te[..., 1] - v_tm[..., 1] * v_te[..., 0])
    if np.any(overlap < 1e-10):
        raise ReflectionError(
            "defective mode structure (coinciding TE/TM eigenvectors); "
            "perturb the azimuth by ~1e-9 rad and retry"
        )

    lam = np.sqrt(np.stack([mu_tm, mu_te], axis=-1))
    v = np.stack([v_tm, v_te], axis=-1)  # (..., 2 comps, 2 modes)
    # psi2 = C psi1 / lam
    g = (c00[..., None] * v[..., 0, :] + c01[..., None] * v[..., 1, :])
    f = (c10[..., None] * v[..., 0, :] + c11[..., None] * v[..., 1, :])
    up = np.stack([v[..., 0, :], v[..., 1, :], g / lam, f / lam], axis=-2)
    down = np.stack([v[..., 0, :], v[..., 1, :], -g / lam, -f / lam], axis=-2)
    return lam, np.stack([up, down], axis=-3)


def _eigvec(a, b, c, d, mu, fallback):
    """Unit eigenvector of [[a, b], [c, d]] for eigenvalue ``mu``; the better
    conditioned of the two row-based candidates, ``fallback`` if both vanish."""
    c1 = np.stack([mu - d, c], axis=-1)
    c2 = np.stack([b, mu - a], axis=-1)
    n1 = np.hypot(c1[..., 0], c1[..., 1])
    n2 = np.hypot(c2[..., 0], c2[..., 1])
    use1 = (n1 >= n2)[..., None]
    vec = np.where(use1, c1, c2)
    norm = np.maximum(n1, n2)
    scale = np.abs(a) + np.abs(d)
    tiny = (norm <= 1e-14 * scale)[..., None]
    safe = np.where(norm > 0, norm, 1.0)[..., None]
    vec = np.where(tiny, fallback, vec / safe)
    # orient toward the fallback so TM/TE labels stay continuous
    flip = (vec[..., 0] * fallback[0] + vec[..., 1] * fallback[1]) < 0
    return np.where(flip[..., None], -vec, vec)


def _vacuum_modes(kappa):
    """Vacuum TM (G = 1) and TE (E_s = 1) modes for exp(+kappa z) and exp(-kappa z)."""
    zero = np.zeros_like(kappa)
    one = np.ones_like(kappa)
    # TM: E_k = -lam, G = 1; TE: E_s = 1, F = lam
    toward = np.stack([
        np.stack([-kappa, zero], -1),
        np.stack([zero, one], -1),
        np.stack([one, zero], -1),
        np.stack([zero, kappa], -1),
    ], axis=-2)
    away = np.stack([
        np.stack([kappa, zero], -1),
        np.stack([zero, one], -1),
        np.stack([one, zero], -1),
        np.stack([zero, -kappa], -1),
    ], axis=-2)
    return toward, away


def slab_reflection_biaxial(eps_xx, eps_yy, eps_zz, d, xi, k, theta):
    """Reflection matrix of an orthorhombic slab, shape ``(..., 2, 2)``.

    Rows/columns are ``(s, p)`` = ``(E_s, H_s)``. ``theta`` is the azimuth of
    the in-plane wavevector measured from the film x-axis.

    The slab is solved by mode matching: four real film modes (two growing
    and two decaying along z), two reflected and two transmitted vacuum
    modes, giving an 8x8 real system per incident polarization. Film modes
    are normalised at the face toward which they grow, so only decaying
    exponentials appear.
    """
    _check_eps(eps_xx, eps_yy, eps_zz)
    q, k = _wavenumbers(xi, k)
    eps_xx, eps_yy, eps_zz, q, k, theta, d = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (eps_xx, eps_yy, eps_zz, q, k, theta, d))
    )
    shape = q.shape
    cos = np.cos(theta)
    sin = np.sin(theta)
    # tensor in the (k_hat, s_hat) frame
    ekk = eps_xx * cos * cos + eps_yy * sin * sin
    ess = eps_xx * sin * sin + eps_yy * cos * cos
    eks = (eps_yy - eps_xx) * sin * cos
    q2 = q * q
    k2 = k * k
    kappa = np.sqrt(k2 + q2)

    lam, film = _modes(ekk, eks, ess, eps_zz, q2, k2)
    toward, away = _vacuum_modes(kappa)
    # film[..., 0] grows with z (decays into the film from the top face)
    grow = film[..., 0, :, :]
    decay = film[..., 1, :, :]

    half = np.isinf(d)
    dd = np.where(half, 0.0, d)
    att = np.exp(-lam * dd[..., None])  # (..., 2)

    n = shape
    if np.all(half):
        # psi(0) = grow a + away r  ->  unknowns (a1, a2, r_p, r_s)
        system = np.concatenate([grow, -away], axis=-1)
        rhs = toward
        sol = np.linalg.solve(system, rhs)
        r_internal = sol[..., 2:4, :]
    else:
        zeros = np.zeros(n + (4, 2))
        top = np.concatenate([grow, decay * att[..., None, :], -away, zeros], axis=-1)
        bottom = np.concatenate([grow * att[..., None, :], decay, zeros, -toward], axis=-1)
        system = np.concatenate([top, bottom], axis=-2)
        rhs = np.concatenate([toward, np.zeros(n + (4, 2))], axis=-2)
        if np.any(half):
            # half-space entries: drop coupling to the (absent) bottom face
            system = system.copy()
            system[half] = _half_space_embedded(grow[half], away[half])
        sol = np.linalg.solve(system, rhs)
        r_internal = sol[..., 4:6, :]

    # internal amplitudes: index 0 = TM (G), 1 = TE (E_s)
    r_pp_g = r_internal[..., 0, 0]
    r_sp_g = r_internal[..., 1, 0]  # TE out per unit G in
    r_ps_g = r_internal[..., 0, 1]  # G out per unit E_s in
    r_ss = r_internal[..., 1, 1]
    # convert G = H_s / q to H_s
    with np.errstate(divide="ignore", invalid="ignore"):
        r_sp = np.where(q > 0, r_sp_g / np.where(q > 0, q, 1.0), 0.0)
    r_ps = r_ps_g * q
    out = np.empty(shape + (2, 2))
    out[..., 0, 0] = r_ss
    out[..., 0, 1] = r_sp
    out[..., 1, 0] = r_ps
    out[..., 1, 1] = r_pp_g
    return out


def _half_space_embedded(grow, away):
    """8x8 system for half-space entries mixed into a finite-thickness batch:
    the bottom-face unknowns are pinned to zero."""
    m = grow.shape[0]
    system = np.zeros((m, 8, 8))
    system[:, :4, 0:2] = grow
    system[:, :4, 4:6] = -away
    system[:, 4:, 2:4] = np.eye(4)[:, :2]
    system[:, 4:, 6:8] = np.eye(4)[:, 2:]
    return system


def mirror_flip(matrix):
    """Reflection matrix of the z-mirrored film (probed from below):
    ``diag(1, -1) R diag(1, -1)``; H_s is an axial component."""
    out = np.array(matrix, dtype=float, copy=True)
    out[..., 0, 1] *= -1.0
    out[..., 1, 0] *= -1.0
    return out


def _diagonal(r_te, r_tm):
    r_te, r_tm = np.broadcast_arrays(r_te, r_tm)
    out = np.zeros(r_te.shape + (2, 2))
    out[..., 0, 0] = r_te
    out[..., 1, 1] = r_tm
    return out


def reflection(film, xi, k, theta_lab=0.0, force_biaxial=False):
    """Reflection matrix ``(..., 2, 2)`` of ``film`` in the lab ``(s, p)`` basis.

    Dispatches to the closed forms when the tensor allows it. The ``(s, p)``
    basis follows the wavevector, so the only effect of the film
    orientation is the azimuth seen by the tensor.
    """
    if isinstance(film, PerfectMirror):
        xi, k, theta_lab = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (xi, k, theta_lab)))
        return _diagonal(-np.ones(xi.shape), np.ones(xi.shape))
    exx, eyy, ezz = eval_tensor(film.tensor, xi)
    kind = film.tensor.classification
    d = film.thickness
    if force_biaxial or kind == "biaxial":
        theta = np.asarray(theta_lab, dtype=float) - film.orientation
        return slab_reflection_biaxial(exx, eyy, ezz, d, xi, k, theta)
    if kind == "isotropic":
        r_te, r_tm = slab_reflection_isotropic(exx, d, xi, k)
    else:
        r_te, r_tm = slab_reflection_uniaxial(exx, ezz, d, xi, k)
    shape = np.broadcast_shapes(np.shape(r_te), np.shape(theta_lab))
    return _diagonal(np.broadcast_to(r_te, shape), np.broadcast_to(r_tm, shape))
