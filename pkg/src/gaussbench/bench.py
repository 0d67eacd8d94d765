"""A virtual optical bench for two-mode Gaussian states.

One mode of the input state is phase-shifted and mixed with the other on a
beam splitter of transmittance T = cos(theta); the detectors then read out
mode 1 of the output.  Two single-mode quantities are observed:

* ``N``: the symmetrized occupation <a'+ a' + 1/2> (photon counting), and
* ``J``: det of the output mode's 2x2 covariance block, equivalently the
  purity through purity = 1/(2 sqrt J) and the Wigner function at the
  origin through W(0) = purity / pi.

Detector imperfections are modeled as a vacuum admixture
V -> eta V + (1 - eta)/2 I (a fictitious beam splitter of transmittance
eta in front of an ideal detector).  For homodyne readout the admixture is
exactly invertible per quadrature variance, which is what
:func:`invert_loss_homodyne` does; for photon counting the transmittance
rescaling T -> eta T is exposed via :func:`rescale_transmittance` with an
``unreachable`` flag for cos(theta)/eta > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalMeasurementError
from .states import ModeCovariance

__all__ = [
    "HOMODYNE_ANGLES",
    "BenchSetting",
    "DetectorModel",
    "Mode1Observation",
    "LossInversion",
    "TransmittanceRescale",
    "bogoliubov",
    "transform_covariance",
    "output_mode1_covariance",
    "output_mode2_covariance",
    "mode_block_to_quad",
    "quadrature_variance",
    "apply_loss",
    "invert_loss_homodyne",
    "rescale_transmittance",
    "sample_quadratures",
    "observe_mode1",
]

#: Quadrature angles measured by the homodyne readout; these three determine
#: the full 2x2 real covariance of the output mode.
HOMODYNE_ANGLES = (0.0, math.pi / 2, math.pi / 4)

_DETECTOR_KINDS = ("ideal", "lossy-homodyne", "lossy-photocount")

_K1 = np.array([[1.0, 1.0j], [-1.0, 1.0j]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class BenchSetting:
    """Beam-splitter angle theta (transmittance cos theta) and phase phi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        if not -1e-12 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValueError(f"theta = {self.theta} outside [0, pi/2]")
        if not -math.pi - 1e-12 < self.phi <= math.pi + 1e-12:
            raise ValueError(f"phi = {self.phi} outside (-pi, pi]")


@dataclass(frozen=True)
class DetectorModel:
    """Detector kind, efficiency and shot budget (None = unlimited)."""

    kind: str = "ideal"
    eta: float = 1.0
    shots: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _DETECTOR_KINDS:
            raise ValueError(f"unknown detector kind {self.kind!r}")
        object.__setattr__(self, "eta", float(self.eta))
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta = {self.eta} outside (0, 1]")
        if self.shots is not None:
            object.__setattr__(self, "shots", int(self.shots))
            if self.shots <= 0:
                raise ValueError("shots must be positive when finite")


@dataclass(frozen=True)
class Mode1Observation:
    """Readout of output mode 1 at one bench setting.

    ``n_prime`` is <a'+ a' + 1/2>, ``j_prime`` the determinant of the
    output mode's covariance block; ``purity`` and ``wigner0`` are the
    derived 1/(2 sqrt j) and purity/pi (NaN when a noisy j_prime fell
    non-positive).  Standard errors are populated for finite-shot
    detectors, None otherwise.
    """

    setting: BenchSetting
    n_prime: float
    j_prime: float
    purity: float
    wigner0: float
    n_stderr: float | None = None
    j_stderr: float | None = None


@dataclass(frozen=True)
class LossInversion:
    """Loss-corrected principal variances and the derived moments."""

    v_min: float
    v_max: float
    j_prime: float
    n_prime: float


@dataclass(frozen=True)
class TransmittanceRescale:
    """Result of folding detector efficiency into the beam-splitter angle."""

    theta_physical: float
    unreachable: bool


def bogoliubov(setting: BenchSetting) -> np.ndarray:
    """4x4 unitary mixing (a1, a1+, a2, a2+) for the given bench setting.

    Block form [[R, S], [-S*, R*]] with R = diag(e^{i phi} cos theta,
    e^{-i phi} cos theta) and S = sin(theta) I.
    """
    c, s = math.cos(setting.theta), math.sin(setting.theta)
    phase = np.exp(1j * setting.phi)
    r_block = np.diag([phase * c, np.conj(phase) * c])
    s_block = s * np.eye(2, dtype=complex)
    return np.block([[r_block, s_block], [-np.conj(s_block), np.conj(r_block)]])


def transform_covariance(v: ModeCovariance, setting: BenchSetting) -> np.ndarray:
    """Full output covariance U+ V U (both modes)."""
    u = bogoliubov(setting)
    return u.conj().T @ v.matrix() @ u


def output_mode1_covariance(v: ModeCovariance, setting: BenchSetting) -> np.ndarray:
    """Covariance block of output mode 1, written out term by term.

    V'_1 = R* V1 R + S V2 S* - S C+ R - R* C S*, where V1, V2, C are the
    input blocks and R, S the Bogoliubov blocks.  Agrees with the (1,1)
    block of :func:`transform_covariance`; kept as an independent expression
    so the two can cross-check each other.
    """
    c, s = math.cos(setting.theta), math.sin(setting.theta)
    phase = np.exp(1j * setting.phi)
    r_block = np.diag([phase * c, np.conj(phase) * c])
    s_block = s * np.eye(2, dtype=complex)
    v1, v2, cross = v.block1(), v.block2(), v.cross()
    return (
        np.conj(r_block) @ v1 @ r_block
        + s_block @ v2 @ np.conj(s_block)
        - s_block @ cross.conj().T @ r_block
        - np.conj(r_block) @ cross @ np.conj(s_block)
    )


def output_mode2_covariance(v: ModeCovariance, setting: BenchSetting) -> np.ndarray:
    """Covariance block of output mode 2, from the full conjugation."""
    return transform_covariance(v, setting)[2:, 2:]


def mode_block_to_quad(block: np.ndarray) -> np.ndarray:
    """Convert a single-mode 2x2 block from mode to quadrature convention."""
    g = 2.0 * _K1.conj().T @ np.asarray(block, dtype=complex) @ _K1
    return g.real


def quadrature_variance(quad_block: np.ndarray, angle: float) -> float:
    """Variance of the rotated quadrature x cos(angle) + p sin(angle)."""
    u = np.array([math.cos(angle), math.sin(angle)])
    return float(u @ quad_block @ u)


def apply_loss(v1p: np.ndarray, eta: float) -> np.ndarray:
    """Vacuum admixture of an inefficient detector: eta V + (1 - eta)/2 I."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta = {eta} outside (0, 1]")
    v1p = np.asarray(v1p, dtype=complex)
    return eta * v1p + (1.0 - eta) * 0.5 * np.eye(2, dtype=complex)


def invert_loss_homodyne(
    v_min_meas: float, v_max_meas: float, eta_hom: float
) -> LossInversion:
    """Undo the vacuum admixture on measured principal quadrature variances.

    Each measured variance satisfies meas = eta * true + (1 - eta), so
    true = (meas - 1 + eta)/eta.  The output moments follow from the
    corrected pair: tr gamma'_1 = 2 tr V'_1 = 4 n' gives
    n' = (v_min + v_max)/4, and det gamma'_1 = 4 det V'_1 gives
    j' = v_min v_max / 4.
    """
    if not 0.0 < eta_hom <= 1.0:
        raise ValueError(f"eta_hom = {eta_hom} outside (0, 1]")
    floor = 1.0 - eta_hom
    if v_min_meas < floor - 1e-12 or v_max_meas < floor - 1e-12:
        raise UnphysicalMeasurementError(
            f"measured variance below the vacuum floor {floor} for eta = {eta_hom}"
        )
    v_min = (v_min_meas - floor) / eta_hom
    v_max = (v_max_meas - floor) / eta_hom
    return LossInversion(
        v_min=v_min,
        v_max=v_max,
        j_prime=v_min * v_max / 4.0,
        n_prime=(v_min + v_max) / 4.0,
    )


def rescale_transmittance(theta_target: float, eta: float) -> TransmittanceRescale:
    """Fold detector efficiency into the beam-splitter transmittance.

    Asking for transmittance cos(theta_target) through an efficiency-eta
    detector needs a physical beam splitter with cos(theta_phys) =
    cos(theta_target)/eta; when that exceeds 1 the setting is unreachable
    and the flag is raised instead of an error.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta = {eta} outside (0, 1]")
    scaled = math.cos(theta_target) / eta
    if scaled > 1.0:
        return TransmittanceRescale(theta_physical=0.0, unreachable=True)
    return TransmittanceRescale(theta_physical=math.acos(scaled), unreachable=False)


def _sampled_variance(
    rng: np.random.Generator, true_variance: float, shots: int
) -> tuple[float, float]:
    """Draw a finite-shot sample variance and its standard error."""
    samples = rng.standard_normal(shots) * math.sqrt(true_variance)
    variance = float(samples.var(ddof=1))
    return variance, math.sqrt(2.0 / (shots - 1)) * variance


def sample_quadratures(
    v: ModeCovariance,
    setting: BenchSetting,
    angle: float,
    shots: int,
    eta: float = 1.0,
    seed=None,
) -> tuple[float, float]:
    """Finite-shot homodyne estimate of one rotated quadrature variance.

    Draws ``shots`` zero-mean Gaussian samples with the true variance of
    the (lossy) output mode at the given angle and returns the unbiased
    (ddof=1) sample variance together with its standard error
    sqrt(2/(shots-1)) * variance.  Deterministic in ``seed``.
    """
    shots = int(shots)
    if shots < 2:
        raise ValueError("at least two shots are required for a sample variance")
    lossy = apply_loss(output_mode1_covariance(v, setting), eta)
    true_variance = quadrature_variance(mode_block_to_quad(lossy), angle)
    return _sampled_variance(np.random.default_rng(seed), true_variance, shots)


def _derived_purity(j_prime: float) -> tuple[float, float]:
    if j_prime > 0.0:
        purity = 1.0 / (2.0 * math.sqrt(j_prime))
        return purity, purity / math.pi
    return float("nan"), float("nan")


def _observe_homodyne(
    v1p: np.ndarray, setting: BenchSetting, det: DetectorModel, seed
) -> Mode1Observation:
    lossy_quad = mode_block_to_quad(apply_loss(v1p, det.eta))
    if det.shots is None:
        variances = [quadrature_variance(lossy_quad, a) for a in HOMODYNE_ANGLES]
        stderrs = None
    else:
        if det.shots < 2:
            raise ValueError("finite-shot homodyne needs at least two shots")
        rng = np.random.default_rng(seed)
        drawn = [
            _sampled_variance(rng, quadrature_variance(lossy_quad, a), det.shots)
            for a in HOMODYNE_ANGLES
        ]
        variances = [d[0] for d in drawn]
        stderrs = [d[1] for d in drawn]

    # Assemble the measured 2x2 quadrature covariance from the three angles
    # (the pi/4 variance fixes the off-diagonal) and undo the admixture on
    # its principal variances.  The admixture is isotropic, so correcting
    # principal variances equals correcting per angle.
    v0, v90, v45 = variances
    off = v45 - (v0 + v90) / 2.0
    measured = np.array([[v0, off], [off, v90]])
    w = np.linalg.eigvalsh(measured)
    corrected = invert_loss_homodyne(float(w[0]), float(w[1]), det.eta)
    n_prime, j_prime = corrected.n_prime, corrected.j_prime

    n_err = j_err = None
    if stderrs is not None:
        # First-order propagation on the corrected per-angle variances
        # u_a = (meas_a - 1 + eta)/eta (errors scale by 1/eta), treating the
        # three angle estimates as independent:
        #   n' = (u0 + u90)/4
        #   j' = (u0 u90 - c^2)/4 with c = u45 - (u0 + u90)/2,
        # so dj/du0 = (u90 + c)/4, dj/du90 = (u0 + c)/4, dj/du45 = -c/2.
        e0, e90, e45 = (s / det.eta for s in stderrs)
        u0 = (v0 - 1.0 + det.eta) / det.eta
        u90 = (v90 - 1.0 + det.eta) / det.eta
        u45 = (v45 - 1.0 + det.eta) / det.eta
        c_off = u45 - (u0 + u90) / 2.0
        n_err = math.sqrt(e0**2 + e90**2) / 4.0
        j_err = math.sqrt(
            ((u90 + c_off) / 4.0 * e0) ** 2
            + ((u0 + c_off) / 4.0 * e90) ** 2
            + (c_off / 2.0 * e45) ** 2
        )

    purity, wigner0 = _derived_purity(j_prime)
    return Mode1Observation(
        setting=setting,
        n_prime=n_prime,
        j_prime=j_prime,
        purity=purity,
        wigner0=wigner0,
        n_stderr=n_err,
        j_stderr=j_err,
    )


def _observe_photocount(
    v1p: np.ndarray, setting: BenchSetting, det: DetectorModel, seed
) -> Mode1Observation:
    lossy = apply_loss(v1p, det.eta)
    n_true = lossy[0, 0].real
    j_true = np.linalg.det(lossy).real
    if det.shots is None:
        n_prime, j_prime = n_true, j_true
        n_err = j_err = None
    else:
        # Photon-number variance of a Gaussian mode with moments (n, m):
        # <dN^2> = n^2 - 1/4 + |m|^2; the purity-route j estimate is modeled
        # with a 2 j / sqrt(shots) error.
        m_sq = abs(lossy[0, 1]) ** 2
        n_err = math.sqrt(max(n_true**2 - 0.25 + m_sq, 0.0) / det.shots)
        j_err = 2.0 * j_true / math.sqrt(det.shots)
        rng = np.random.default_rng(seed)
        n_prime = n_true + n_err * rng.standard_normal()
        j_prime = j_true + j_err * rng.standard_normal()
    purity, wigner0 = _derived_purity(j_prime)
    return Mode1Observation(
        setting=setting,
        n_prime=n_prime,
        j_prime=j_prime,
        purity=purity,
        wigner0=wigner0,
        n_stderr=n_err,
        j_stderr=j_err,
    )


def observe_mode1(
    v: ModeCovariance,
    setting: BenchSetting,
    det: DetectorModel = DetectorModel(),
    seed=None,
) -> Mode1Observation:
    """Measure N and J of output mode 1 at one bench setting.

    Ideal detectors return exact moments.  Lossy kinds first mix in vacuum
    noise via :func:`apply_loss`; homodyne readout then samples (for finite
    shots) three quadrature variances and inverts the admixture, while
    photocount readout perturbs the lossy moments with Gaussian noise at
    the physical shot-noise scale.  Deterministic in ``seed``.
    """
    v1p = output_mode1_covariance(v, setting)
    if det.kind == "ideal":
        n_prime = v1p[0, 0].real
        j_prime = np.linalg.det(v1p).real
        purity, wigner0 = _derived_purity(j_prime)
        return Mode1Observation(
            setting=setting,
            n_prime=float(n_prime),
            j_prime=float(j_prime),
            purity=purity,
            wigner0=wigner0,
        )
    if det.kind == "lossy-homodyne":
        return _observe_homodyne(v1p, setting, det, seed)
    return _observe_photocount(v1p, setting, det, seed)
