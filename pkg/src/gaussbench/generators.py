"""Seeded constructors for two-mode Gaussian covariance matrices.

Random states are built Williamson-style, gamma = S diag(nu1, nu1, nu2, nu2)
S^T with nu_i >= 1 and S a composition of local rotations, local squeezers
and beam-splitter symplectics.  This guarantees physicality by construction
and makes the symplectic spectrum (nu1, nu2) available as a free oracle.
"""

from __future__ import annotations

import math

import numpy as np

from .states import QuadCovariance

__all__ = [
    "vacuum_state",
    "tmsv_state",
    "thermal_state",
    "two_mode_squeezed_thermal",
    "rotation_symplectic",
    "squeeze_symplectic",
    "beam_splitter_symplectic",
    "random_local_symplectic",
    "conjugate_local",
    "random_state",
    "special_form_state",
]


def vacuum_state() -> QuadCovariance:
    """Two-mode vacuum: the identity covariance matrix."""
    return QuadCovariance(np.eye(4))


def _tmsv_entries(r: float) -> np.ndarray:
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def tmsv_state(r: float) -> QuadCovariance:
    """Two-mode squeezed vacuum with squeezing parameter ``r``.

    Standard form with A = B = cosh(2r) I and cross block
    diag(sinh 2r, -sinh 2r); pure (det gamma = 1) for every ``r``.
    """
    if not math.isfinite(r):
        raise ValueError("squeezing parameter must be finite")
    return QuadCovariance(_tmsv_entries(r))


def thermal_state(nu1: float, nu2: float) -> QuadCovariance:
    """Product of two thermal modes with symplectic eigenvalues nu1, nu2 >= 1."""
    return QuadCovariance(np.diag([nu1, nu1, nu2, nu2]).astype(float))


def two_mode_squeezed_thermal(r: float, nu1: float, nu2: float) -> QuadCovariance:
    """Two-mode squeezing applied to a thermal product state.

    gamma = S_tm(r) diag(nu1, nu1, nu2, nu2) S_tm(r)^T where S_tm mixes the
    modes with cosh r / sinh r weights; the cross block stays antidiagonal
    in the mode picture (pure mc-type correlations).
    """
    ch, sh = math.cosh(r), math.sinh(r)
    s_tm = np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )
    d = np.diag([nu1, nu1, nu2, nu2]).astype(float)
    return QuadCovariance(s_tm @ d @ s_tm.T)


def rotation_symplectic(angle: float) -> np.ndarray:
    """Single-mode phase rotation in the (x, p) plane."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]])


def squeeze_symplectic(s: float) -> np.ndarray:
    """Single-mode squeezer diag(e^s, e^-s)."""
    return np.diag([math.exp(s), math.exp(-s)])


def beam_splitter_symplectic(theta: float) -> np.ndarray:
    """Two-mode beam splitter with transmittance cos(theta)."""
    c, s = math.cos(theta), math.sin(theta)
    eye = np.eye(2)
    return np.block([[c * eye, s * eye], [-s * eye, c * eye]])


def random_local_symplectic(
    rng: np.random.Generator, max_squeeze: float = 0.8
) -> np.ndarray:
    """Random element of Sp(2, R) as rotation * squeezer * rotation."""
    a, b = rng.uniform(-math.pi, math.pi, size=2)
    s = rng.uniform(-max_squeeze, max_squeeze)
    return rotation_symplectic(a) @ squeeze_symplectic(s) @ rotation_symplectic(b)


def conjugate_local(
    g: QuadCovariance, s1: np.ndarray, s2: np.ndarray
) -> QuadCovariance:
    """Apply per-mode symplectics: gamma -> (S1 (+) S2) gamma (S1 (+) S2)^T."""
    s = np.block([[s1, np.zeros((2, 2))], [np.zeros((2, 2)), s2]])
    return QuadCovariance(s @ g.entries @ s.T)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_state(
    seed,
    purity: str = "mixed",
    symmetry: str = "general",
    *,
    nu: tuple[float, float] | None = None,
    max_thermal: float = 2.5,
    max_squeeze: float = 0.8,
) -> QuadCovariance:
    """Deterministic random physical state for a given seed.

    Parameters
    ----------
    seed : int | numpy.random.Generator
        Entropy source; identical seeds give identical matrices.
    purity : "pure" | "mixed"
        Pure states use nu1 = nu2 = 1.
    symmetry : "symmetric" | "general"
        The symmetric class scales a two-mode squeezed vacuum by a common
        thermal factor and dresses it with local symplectics, which keeps
        I1 = I2 exactly; the general class conjugates a thermal diagonal by
        layered local/beam-splitter symplectics.
    nu : optional pair overriding the drawn symplectic eigenvalues
        (ignored for pure states; the symmetric class uses only nu[0]).
    """
    if purity not in ("pure", "mixed"):
        raise ValueError(f"unknown purity class {purity!r}")
    if symmetry not in ("symmetric", "general"):
        raise ValueError(f"unknown symmetry class {symmetry!r}")
    rng = _as_rng(seed)

    if symmetry == "symmetric":
        if purity == "pure":
            scale = 1.0
        elif nu is not None:
            scale = float(nu[0])
        else:
            scale = float(rng.uniform(1.0, max_thermal))
        r = float(rng.uniform(0.0, max_squeeze))
        base = QuadCovariance(scale * _tmsv_entries(r))
        s1 = random_local_symplectic(rng, max_squeeze)
        s2 = random_local_symplectic(rng, max_squeeze)
        return conjugate_local(base, s1, s2)

    if purity == "pure":
        nu1 = nu2 = 1.0
    elif nu is not None:
        nu1, nu2 = float(nu[0]), float(nu[1])
    else:
        nu1 = float(rng.uniform(1.0, max_thermal))
        nu2 = float(rng.uniform(1.0, max_thermal))
    d = np.diag([nu1, nu1, nu2, nu2])
    l1 = random_local_symplectic(rng, max_squeeze)
    l2 = random_local_symplectic(rng, max_squeeze)
    b1 = beam_splitter_symplectic(rng.uniform(0.0, math.pi / 2))
    m1 = random_local_symplectic(rng, max_squeeze)
    m2 = random_local_symplectic(rng, max_squeeze)
    b2 = beam_splitter_symplectic(rng.uniform(0.0, math.pi / 2))
    locals_a = np.block([[l1, np.zeros((2, 2))], [np.zeros((2, 2)), l2]])
    locals_b = np.block([[m1, np.zeros((2, 2))], [np.zeros((2, 2)), m2]])
    s = locals_a @ b1 @ locals_b @ b2
    return QuadCovariance(s @ d @ s.T)


def special_form_state(seed, form: str = "antidiagonal") -> QuadCovariance:
    """Random state whose standard-form cross block is diagonal or antidiagonal.

    ``"antidiagonal"`` draws a two-mode squeezed thermal state (pure mc-type
    correlations); ``"diagonal"`` beam-splits a two-mode thermal product
    (pure ms-type correlations).  Both are then dressed with random local
    phase rotations, which preserve the pattern while making the surviving
    cross entry complex.
    """
    rng = _as_rng(seed)
    if form == "antidiagonal":
        r = float(rng.uniform(0.15, 0.9))
        nu1 = float(rng.uniform(1.0, 2.2))
        nu2 = float(rng.uniform(1.0, 2.2))
        g = two_mode_squeezed_thermal(r, nu1, nu2)
    elif form == "diagonal":
        theta = float(rng.uniform(0.2, 1.3))
        nu1 = float(rng.uniform(1.0, 1.8))
        nu2 = nu1 + float(rng.uniform(0.4, 1.2))
        b = beam_splitter_symplectic(theta)
        g = QuadCovariance(b @ np.diag([nu1, nu1, nu2, nu2]) @ b.T)
    else:
        raise ValueError(f"unknown special form {form!r}")
    ph1, ph2 = rng.uniform(-math.pi, math.pi, size=2)
    return conjugate_local(g, rotation_symplectic(ph1), rotation_symplectic(ph2))
