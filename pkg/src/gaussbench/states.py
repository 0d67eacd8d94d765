"""Covariance-matrix representations of two-mode Gaussian states.

Conventions used throughout the package:

* Quadrature ordering is (x1, p1, x2, p2) with a_j = (x_j + i p_j)/sqrt(2),
  and the covariance matrix gamma is normalized so that vacuum gives the
  identity.  All states are zero-mean.
* The mode-operator form collects the symmetrized second moments of
  w = (a1, a1+, a2, a2+) into the Hermitian matrix
  V_ij = (-1)^(i+j) <w_i w_j+ + w_j+ w_i>/2, which has the block layout

      V = [[ n1 ,  m1 ,  ms ,  mc ],
           [ m1*,  n1 ,  mc*,  ms*],
           [ ms*,  mc ,  n2 ,  m2 ],
           [ mc*,  ms ,  m2*,  n2 ]]

  with n_j = <a_j+ a_j> + 1/2 real, m_j = -<a_j^2>,
  ms = <a1 a2+ + a2+ a1>/2 and mc = -<a1 a2>.  Vacuum is n_j = 1/2, m = 0.
* The two pictures are connected by a fixed unitary K with
  V = K (gamma/2) K+, so conversions are exact basis changes.

Local Gaussian unitaries act on gamma as S1 (+) S2 with S_j in Sp(2, R);
four polynomial combinations of the blocks are unchanged by them.  Writing
gamma = [[A, C], [C^T, B]] and J = [[0, 1], [-1, 0]]:

    I1 = det A,  I2 = det B,  I3 = det C,  I4 = tr(A J C J B J C^T J)

and in the mode picture, with Z = diag(1, -1) and V blocks V1, V2, C_V:

    J1 = det V1,  J2 = det V2,  J3 = det C_V,
    J4 = tr(V1 Z C_V Z V2 Z C_V+ Z),

related exactly by I1 = 4 J1, I2 = 4 J2, I3 = 4 J3, I4 = 16 J4.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalStateError

__all__ = [
    "SYMMETRY_ATOL",
    "PHYSICALITY_SLACK",
    "OMEGA",
    "QuadCovariance",
    "ModeCovariance",
    "InvariantSet",
    "PhysicalityReport",
    "SingleModeSymplectic",
    "StandardFormResult",
    "symplectic_eigenvalues",
    "validate_physical",
    "quad_to_mode",
    "mode_to_quad",
    "invariants_quad",
    "invariants_mode",
    "standard_form_prep",
    "detect_special_form",
]

#: Absolute tolerance for symmetry / Hermiticity checks on input matrices.
SYMMETRY_ATOL = 1e-12

#: Slack allowed below the uncertainty bound nu >= 1 before a state is
#: declared unphysical (double-precision 4x4 eigenvalue noise).
PHYSICALITY_SLACK = 1e-9

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

#: Symplectic form for two modes in (x1, p1, x2, p2) ordering.
OMEGA = np.block([[_J2, np.zeros((2, 2))], [np.zeros((2, 2)), _J2]])

_Z2 = np.diag([1.0, -1.0]).astype(complex)

# Basis change between quadrature and mode-operator second moments,
# V = _K (gamma/2) _K+.  Rows correspond to (a1, -a1+, a2, -a2+) built from
# (x1, p1, x2, p2); the sign flips on the conjugate rows produce the
# alternating-sign convention of the V layout above.
_K1 = np.array([[1.0, 1.0j], [-1.0, 1.0j]], dtype=complex) / math.sqrt(2.0)
_K = np.block(
    [[_K1, np.zeros((2, 2), dtype=complex)], [np.zeros((2, 2), dtype=complex), _K1]]
)


@dataclass(frozen=True, eq=False)
class QuadCovariance:
    """4x4 real symmetric covariance matrix in (x1, p1, x2, p2) ordering.

    Entries are vacuum-normalized (vacuum -> identity).  The matrix is
    symmetrized on construction and stored read-only.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.entries, dtype=float)
        if g.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("covariance entries must be finite")
        asym = float(np.max(np.abs(g - g.T)))
        if asym > SYMMETRY_ATOL:
            raise ValueError(
                f"covariance matrix is not symmetric (max asymmetry {asym:.3e})"
            )
        g = (g + g.T) / 2.0
        g.flags.writeable = False
        object.__setattr__(self, "entries", g)

    @property
    def block_a(self) -> np.ndarray:
        """Mode-1 2x2 diagonal block."""
        return self.entries[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        """Mode-2 2x2 diagonal block."""
        return self.entries[2:, 2:]

    @property
    def block_c(self) -> np.ndarray:
        """Cross-correlation 2x2 block (mode 1 rows, mode 2 columns)."""
        return self.entries[:2, 2:]


@dataclass(frozen=True)
class ModeCovariance:
    """Scalar block entries of the mode-operator covariance matrix V.

    ``n1``/``n2`` are the symmetrized occupations <a+a> + 1/2, ``m1``/``m2``
    the single-mode squeeze correlations -<a^2>, and ``ms``/``mc`` the
    beam-splitter-like and two-mode-squeeze-like cross correlations.
    """

    n1: float
    n2: float
    m1: complex = 0j
    m2: complex = 0j
    ms: complex = 0j
    mc: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "n1", float(self.n1))
        object.__setattr__(self, "n2", float(self.n2))
        for name in ("m1", "m2", "ms", "mc"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        values = (self.n1, self.n2, self.m1, self.m2, self.ms, self.mc)
        if not all(cmath.isfinite(z) for z in values):
            raise ValueError("mode covariance entries must be finite")
        for n, m, label in (
            (self.n1, self.m1, "1"),
            (self.n2, self.m2, "2"),
        ):
            if n < 0.5 - PHYSICALITY_SLACK:
                raise UnphysicalStateError(
                    f"n{label} = {n} violates the vacuum floor 1/2"
                )
            if n * n - abs(m) ** 2 < 0.25 - PHYSICALITY_SLACK:
                raise UnphysicalStateError(
                    f"reduced mode {label} violates det V{label} >= 1/4"
                )

    def matrix(self) -> np.ndarray:
        """Assemble the full 4x4 Hermitian matrix from the six scalars."""
        n1, n2, m1, m2, ms, mc = self.n1, self.n2, self.m1, self.m2, self.ms, self.mc
        return np.array(
            [
                [n1, m1, ms, mc],
                [np.conj(m1), n1, np.conj(mc), np.conj(ms)],
                [np.conj(ms), mc, n2, m2],
                [np.conj(mc), ms, np.conj(m2), n2],
            ],
            dtype=complex,
        )

    def block1(self) -> np.ndarray:
        return np.array([[self.n1, self.m1], [np.conj(self.m1), self.n1]])

    def block2(self) -> np.ndarray:
        return np.array([[self.n2, self.m2], [np.conj(self.m2), self.n2]])

    def cross(self) -> np.ndarray:
        return np.array([[self.ms, self.mc], [np.conj(self.mc), np.conj(self.ms)]])

    @classmethod
    def from_matrix(cls, v: np.ndarray, atol: float = 1e-10) -> "ModeCovariance":
        """Extract the six scalars from a 4x4 matrix, checking the layout.

        Parameters
        ----------
        v : np.ndarray
            4x4 complex matrix expected to carry the block structure
            documented in the module docstring.
        atol : float
            Absolute tolerance on Hermiticity and on the internal
            repetitions of the layout.
        """
        v = np.asarray(v, dtype=complex)
        if v.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {v.shape}")
        if np.max(np.abs(v - v.conj().T)) > atol:
            raise ValueError("matrix is not Hermitian within tolerance")
        checks = (
            abs(v[0, 0] - v[1, 1]),
            abs(v[2, 2] - v[3, 3]),
            abs(v[0, 2] - np.conj(v[1, 3])),
            abs(v[0, 3] - v[1, 2].conj()),
        )
        if max(checks) > atol:
            raise ValueError("matrix does not have the two-mode block layout")
        return cls(
            n1=(v[0, 0] + v[1, 1]).real / 2,
            n2=(v[2, 2] + v[3, 3]).real / 2,
            m1=v[0, 1],
            m2=v[2, 3],
            ms=(v[0, 2] + np.conj(v[1, 3])) / 2,
            mc=(v[0, 3] + np.conj(v[1, 2])) / 2,
        )


@dataclass(frozen=True)
class InvariantSet:
    """The four local-symplectic invariants in the mode convention.

    The quadrature-convention values I1..I4 are derived properties with the
    exact scaling I1 = 4 J1, I2 = 4 J2, I3 = 4 J3, I4 = 16 J4, so the two
    conventions can never drift apart.  ``j4`` may be ``None`` when a
    measurement scheme could not determine it.
    """

    j1: float
    j2: float
    j3: float
    j4: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "j1", float(self.j1))
        object.__setattr__(self, "j2", float(self.j2))
        object.__setattr__(self, "j3", float(self.j3))
        if self.j4 is not None:
            object.__setattr__(self, "j4", float(self.j4))
        values = (self.j1, self.j2, self.j3) + (() if self.j4 is None else (self.j4,))
        if not all(math.isfinite(x) for x in values):
            raise ValueError("invariants must be finite")

    @property
    def i1(self) -> float:
        return 4.0 * self.j1

    @property
    def i2(self) -> float:
        return 4.0 * self.j2

    @property
    def i3(self) -> float:
        return 4.0 * self.j3

    @property
    def i4(self) -> float | None:
        return None if self.j4 is None else 16.0 * self.j4

    def require_i4(self) -> float:
        if self.j4 is None:
            raise ValueError("the fourth invariant is not available on this set")
        return 16.0 * self.j4

    def quad_determinant(self) -> float:
        """det(gamma) expressed through the invariants: I1 I2 + I3^2 - I4."""
        return self.i1 * self.i2 + self.i3**2 - self.require_i4()


@dataclass(frozen=True)
class PhysicalityReport:
    """Outcome of the uncertainty-bound check on a quadrature covariance."""

    physical: bool
    nu_minus: float
    nu_plus: float
    positive_definite: bool
    symmetric: bool
    slack: float


def symplectic_eigenvalues(g: QuadCovariance) -> tuple[float, float]:
    """Symplectic spectrum of gamma: moduli of the eigenvalues of i*Omega*gamma.

    The four eigenvalue moduli come in two degenerate pairs; each pair is
    averaged to suppress eigensolver noise.  Returns (nu_minus, nu_plus).
    """
    ev = np.linalg.eigvals(1j * OMEGA @ g.entries)
    mods = np.sort(np.abs(ev))
    return float((mods[0] + mods[1]) / 2), float((mods[2] + mods[3]) / 2)


def validate_physical(
    g: QuadCovariance, slack: float = PHYSICALITY_SLACK
) -> PhysicalityReport:
    """Check a covariance matrix against the uncertainty bound nu >= 1.

    A matrix is physical when it is positive definite and both symplectic
    eigenvalues are at least ``1 - slack``.
    """
    nu_minus, nu_plus = symplectic_eigenvalues(g)
    positive = bool(np.all(np.linalg.eigvalsh(g.entries) > 0.0))
    return PhysicalityReport(
        physical=positive and nu_minus >= 1.0 - slack,
        nu_minus=nu_minus,
        nu_plus=nu_plus,
        positive_definite=positive,
        symmetric=True,
        slack=slack,
    )


def quad_to_mode(g: QuadCovariance) -> ModeCovariance:
    """Convert a quadrature covariance matrix to mode-operator form."""
    v = _K @ (g.entries / 2.0) @ _K.conj().T
    return ModeCovariance.from_matrix(v, atol=1e-9 * max(1.0, float(np.max(np.abs(v)))))


def mode_to_quad(v: ModeCovariance) -> QuadCovariance:
    """Convert mode-operator form back to the quadrature picture."""
    g = 2.0 * _K.conj().T @ v.matrix() @ _K
    scale = max(1.0, float(np.max(np.abs(g))))
    if float(np.max(np.abs(g.imag))) > 1e-10 * scale:
        raise ValueError("mode covariance does not map to a real quadrature matrix")
    return QuadCovariance(g.real)


def invariants_quad(g: QuadCovariance) -> InvariantSet:
    """Evaluate the four invariants from the quadrature blocks of gamma."""
    a, b, c = g.block_a, g.block_b, g.block_c
    i1 = float(np.linalg.det(a))
    i2 = float(np.linalg.det(b))
    i3 = float(np.linalg.det(c))
    i4 = float(np.trace(a @ _J2 @ c @ _J2 @ b @ _J2 @ c.T @ _J2))
    return InvariantSet(j1=i1 / 4, j2=i2 / 4, j3=i3 / 4, j4=i4 / 16)


def invariants_mode(v: ModeCovariance) -> InvariantSet:
    """Evaluate the four invariants from the mode-operator blocks of V."""
    v1, v2, c = v.block1(), v.block2(), v.cross()
    j1 = np.linalg.det(v1).real
    j2 = np.linalg.det(v2).real
    j3 = np.linalg.det(c).real
    j4 = np.trace(v1 @ _Z2 @ c @ _Z2 @ v2 @ _Z2 @ c.conj().T @ _Z2).real
    return InvariantSet(j1=float(j1), j2=float(j2), j3=float(j3), j4=float(j4))


@dataclass(frozen=True)
class SingleModeSymplectic:
    """One-mode rotation+squeeze transformation on the (a, a+) pair.

    The matrix is

        [[exp(-i alpha) cosh theta,  exp(i beta) sinh theta],
         [exp(-i beta) sinh theta,   exp(i alpha) cosh theta]]

    with unit determinant; ``alpha`` and ``beta`` are phases and ``theta``
    the squeeze magnitude.
    """

    alpha: float
    beta: float
    theta: float

    def matrix(self) -> np.ndarray:
        ch, sh = math.cosh(self.theta), math.sinh(self.theta)
        ea, eb = cmath.exp(-1j * self.alpha), cmath.exp(1j * self.beta)
        return np.array(
            [[ea * ch, eb * sh], [np.conj(eb) * sh, np.conj(ea) * ch]], dtype=complex
        )

    @classmethod
    def identity(cls) -> "SingleModeSymplectic":
        return cls(alpha=0.0, beta=0.0, theta=0.0)


@dataclass(frozen=True)
class StandardFormResult:
    """Local transformations and the resulting block-diagonalized state."""

    s1: SingleModeSymplectic
    s2: SingleModeSymplectic
    vt: ModeCovariance
    residual_m1: float
    residual_m2: float


def _standardizing_local(n: float, m: complex, label: str) -> SingleModeSymplectic:
    """Rotation+squeeze that cancels a single mode's m = -<a^2> correlation.

    With m = |m| e^(i mu) the choice alpha = beta = (mu + pi)/2,
    tanh(2 theta) = |m|/n sends the off-diagonal of S V_j S+ to
    n sinh(2 theta) - |m| cosh(2 theta) = 0 and the diagonal to
    sqrt(n^2 - |m|^2).  For m = 0 the exact identity is returned so that an
    already block-diagonal state passes through untouched.
    """
    magnitude = abs(m)
    if magnitude == 0.0:
        return SingleModeSymplectic.identity()
    if magnitude >= n:
        raise UnphysicalStateError(
            f"|m{label}| >= n{label}: reduced mode {label} is unphysical"
        )
    phase = (cmath.phase(m) + math.pi) / 2
    theta = 0.5 * math.atanh(magnitude / n)
    return SingleModeSymplectic(alpha=phase, beta=phase, theta=theta)


def standard_form_prep(v: ModeCovariance) -> StandardFormResult:
    """Block-diagonalize both single-mode blocks by local transformations.

    Returns the per-mode transformations S1, S2 and vt = S V S+ with
    m1, m2 driven to zero (up to double-precision residuals, reported in
    ``residual_m1``/``residual_m2``).  All four invariants of ``vt`` equal
    those of ``v`` since det S_j = 1.
    """
    s1 = _standardizing_local(v.n1, v.m1, "1")
    s2 = _standardizing_local(v.n2, v.m2, "2")
    s = np.block(
        [
            [s1.matrix(), np.zeros((2, 2), dtype=complex)],
            [np.zeros((2, 2), dtype=complex), s2.matrix()],
        ]
    )
    vt_matrix = s @ v.matrix() @ s.conj().T
    scale = max(1.0, float(np.max(np.abs(vt_matrix))))
    vt = ModeCovariance.from_matrix(vt_matrix, atol=1e-9 * scale)
    return StandardFormResult(
        s1=s1,
        s2=s2,
        vt=vt,
        residual_m1=abs(vt.m1),
        residual_m2=abs(vt.m2),
    )


def detect_special_form(v: ModeCovariance, tol: float = 1e-9) -> str | None:
    """Classify the cross block of a block-diagonalized state.

    Returns ``"diagonal"`` when the cross block is diag(ms, ms*) (the mc
    entry negligible relative to the block), ``"antidiagonal"`` when it is
    antidiag(mc, mc*), and ``None`` otherwise.  A vanishing cross block
    satisfies both patterns and is reported as ``"diagonal"`` by tie-break.

    The state must already be block-diagonal (m1 = m2 = 0 within ``tol``);
    otherwise a ``ValueError`` is raised.
    """
    if abs(v.m1) > tol * max(1.0, v.n1) or abs(v.m2) > tol * max(1.0, v.n2):
        raise ValueError("state is not in standard form (m1, m2 must vanish)")
    ms_mag, mc_mag = abs(v.ms), abs(v.mc)
    total = ms_mag + mc_mag
    if mc_mag <= tol * total or total == 0.0:
        return "diagonal"
    if ms_mag <= tol * total:
        return "antidiagonal"
    return None
