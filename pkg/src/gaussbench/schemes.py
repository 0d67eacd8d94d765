"""Measurement protocols reconstructing symplectic invariants.

Both protocols observe only output mode 1 of the bench, at a handful of
fixed (theta, phi) settings:

* Protocol 1 reads J1 and J2 directly from the determinant observable at
  full transmission / full reflection and combines six determinant and
  four photon-number readings at theta = pi/4 into J3.  The fourth
  invariant is out of reach unless the state's cross block is known to be
  diagonal or antidiagonal, in which case J4 = 2 |J3| sqrt(J1 J2) exactly.
* Protocol 2 first block-diagonalizes the state by local operations
  (standard_form_prep), after which four settings determine all four
  invariants, including the decomposition of the cross block into
  Re m~s, Im m~s and |m~c|.

Reconstruction is a pure function of the recorded transcript (plus, for
protocol 1, the recorded special-form flag), so replaying a stored
transcript reproduces the reported invariants bit for bit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bench import BenchSetting, DetectorModel, Mode1Observation, observe_mode1
from .entanglement import (
    DEFAULT_SYM_TOL,
    EntanglementReport,
    entanglement_report,
)
from .errors import ReconstructionError
from .states import (
    InvariantSet,
    ModeCovariance,
    detect_special_form,
    standard_form_prep,
)

__all__ = [
    "PlanEntry",
    "MeasurementPlan",
    "TranscriptRecord",
    "SchemeResult",
    "ConsistencyReport",
    "scheme1_plan",
    "scheme2_plan",
    "scheme1",
    "scheme2",
    "reconstruct_scheme1",
    "reconstruct_scheme2",
    "reconstruct_from_transcript",
    "consistency_check",
]

#: Thresholds for a reconstructed |m~c|^2 that fluctuated negative: values
#: in (-CLAMP_WARN, 0) clamp silently, in (-CLAMP_FAIL, -CLAMP_WARN] clamp
#: with a warning, below -CLAMP_FAIL the reconstruction is rejected.
MC2_CLAMP_WARN = 1e-9
MC2_CLAMP_FAIL = 1e-6

_S00 = BenchSetting(0.0, 0.0)
_S90 = BenchSetting(math.pi / 2, 0.0)
_S45 = BenchSetting(math.pi / 4, 0.0)
_S45_PI = BenchSetting(math.pi / 4, math.pi)
_S45_P = BenchSetting(math.pi / 4, math.pi / 2)
_S45_M = BenchSetting(math.pi / 4, -math.pi / 2)


@dataclass(frozen=True)
class PlanEntry:
    """One bench setting and the observables to record there."""

    setting: BenchSetting
    observables: tuple[str, ...]

    def __post_init__(self) -> None:
        for obs in self.observables:
            if obs not in ("N", "J"):
                raise ValueError(f"unknown observable {obs!r}")


@dataclass(frozen=True)
class MeasurementPlan:
    name: str
    entries: tuple[PlanEntry, ...]


def scheme1_plan() -> MeasurementPlan:
    """Six determinant settings and four photon-number settings."""
    return MeasurementPlan(
        name="scheme1",
        entries=(
            PlanEntry(_S00, ("N", "J")),
            PlanEntry(_S90, ("N", "J")),
            PlanEntry(_S45, ("N", "J")),
            PlanEntry(_S45_P, ("N", "J")),
            PlanEntry(_S45_PI, ("J",)),
            PlanEntry(_S45_M, ("J",)),
        ),
    )


def scheme2_plan() -> MeasurementPlan:
    """Both observables at the four standard-form settings."""
    return MeasurementPlan(
        name="scheme2",
        entries=(
            PlanEntry(_S00, ("N", "J")),
            PlanEntry(_S90, ("N", "J")),
            PlanEntry(_S45, ("N", "J")),
            PlanEntry(_S45_P, ("N", "J")),
        ),
    )


@dataclass(frozen=True)
class TranscriptRecord:
    """One recorded measurement: setting, observable letter, value, stderr."""

    theta: float
    phi: float
    observable: str
    value: float
    stderr: float | None = None

    def to_dict(self) -> dict:
        out = {
            "theta": self.theta,
            "phi": self.phi,
            "observable": self.observable,
            "value": self.value,
        }
        if self.stderr is not None:
            out["stderr"] = self.stderr
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TranscriptRecord":
        return cls(
            theta=float(data["theta"]),
            phi=float(data["phi"]),
            observable=str(data["observable"]),
            value=float(data["value"]),
            stderr=None if data.get("stderr") is None else float(data["stderr"]),
        )


@dataclass(frozen=True)
class SchemeResult:
    """Reconstructed invariants plus everything needed to audit them."""

    scheme: str
    invariants: InvariantSet
    entanglement: EntanglementReport
    observations: tuple[Mode1Observation, ...]
    transcript: tuple[TranscriptRecord, ...]
    invariant_stderr: dict | None
    status: str
    special_form: str | None = None
    ms_real: float | None = None
    ms_imag: float | None = None
    mc_magnitude: float | None = None  # sign is unrecoverable; magnitude only
    residual_m1: float | None = None
    residual_m2: float | None = None


@dataclass(frozen=True)
class ConsistencyReport:
    """Per-invariant deltas between the two protocols on the same state."""

    delta_j1: float
    delta_j2: float
    delta_j3: float
    max_delta: float
    tol: float
    within_tolerance: bool


def _run_plan(v, plan, det, seed):
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = seq.spawn(len(plan.entries))
    observations = []
    records = []
    for entry, child in zip(plan.entries, children):
        obs = observe_mode1(v, entry.setting, det, seed=child)
        observations.append(obs)
        for letter in entry.observables:
            records.append(
                TranscriptRecord(
                    theta=entry.setting.theta,
                    phi=entry.setting.phi,
                    observable=letter,
                    value=obs.n_prime if letter == "N" else obs.j_prime,
                    stderr=obs.n_stderr if letter == "N" else obs.j_stderr,
                )
            )
    return tuple(observations), tuple(records)


def _pick(records, theta, phi, observable):
    for rec in records:
        if (
            rec.observable == observable
            and math.isclose(rec.theta, theta, rel_tol=0.0, abs_tol=1e-9)
            and math.isclose(rec.phi, phi, rel_tol=0.0, abs_tol=1e-9)
        ):
            return rec
    raise ReconstructionError(
        f"transcript is missing {observable} at theta={theta:.6f}, phi={phi:.6f}"
    )


def _err(record) -> float:
    return 0.0 if record.stderr is None else record.stderr


def reconstruct_scheme1(
    records, special_form: str | None = None
) -> tuple[InvariantSet, dict | None]:
    """Protocol-1 reconstruction from a transcript.

    J1 and J2 are the determinant readings at (0, 0) and (pi/2, 0); J3
    combines the four theta = pi/4 determinant readings with the
    photon-number readings.  When ``special_form`` says the cross block is
    diagonal or antidiagonal, J4 = 2 |J3| sqrt(J1 J2) is attached.
    """
    j00 = _pick(records, 0.0, 0.0, "J")
    j90 = _pick(records, math.pi / 2, 0.0, "J")
    j45 = _pick(records, math.pi / 4, 0.0, "J")
    j45_pi = _pick(records, math.pi / 4, math.pi, "J")
    j45_p = _pick(records, math.pi / 4, math.pi / 2, "J")
    j45_m = _pick(records, math.pi / 4, -math.pi / 2, "J")
    n00 = _pick(records, 0.0, 0.0, "N")
    n90 = _pick(records, math.pi / 2, 0.0, "N")
    n45 = _pick(records, math.pi / 4, 0.0, "N")
    n45_p = _pick(records, math.pi / 4, math.pi / 2, "N")

    j1, j2 = j00.value, j90.value
    if j1 <= 0.0 or j2 <= 0.0:
        raise ReconstructionError(f"non-positive J1/J2 reconstructed: {j1}, {j2}")

    det_comb = (
        j45.value + j45_pi.value + j45_p.value + j45_m.value - j00.value - j90.value
    )
    num_comb = (
        n00.value**2
        + n90.value**2
        + 2.0 * n45.value**2
        + 2.0 * n45_p.value**2
        - 2.0 * (n00.value + n90.value) * (n45.value + n45_p.value)
    )
    j3 = (det_comb + num_comb) / 4.0
    j4 = 2.0 * abs(j3) * math.sqrt(j1 * j2) if special_form is not None else None
    inv = InvariantSet(j1=j1, j2=j2, j3=j3, j4=j4)

    if all(rec.stderr is None for rec in records):
        return inv, None
    # First-order error propagation treating records as independent.  Each
    # determinant reading enters J3 with weight 1/4; the photon-number
    # combination has gradients
    #   d/dn00 = 2 n00 - 2 (n45 + n45p)   (and the same for n90),
    #   d/dn45 = 4 n45 - 2 (n00 + n90)    (and the same for n45p).
    grad_n00 = 2.0 * n00.value - 2.0 * (n45.value + n45_p.value)
    grad_n90 = 2.0 * n90.value - 2.0 * (n45.value + n45_p.value)
    grad_n45 = 4.0 * n45.value - 2.0 * (n00.value + n90.value)
    grad_n45p = 4.0 * n45_p.value - 2.0 * (n00.value + n90.value)
    var_j3 = (
        sum(_err(r) ** 2 for r in (j00, j90, j45, j45_pi, j45_p, j45_m))
        + (grad_n00 * _err(n00)) ** 2
        + (grad_n90 * _err(n90)) ** 2
        + (grad_n45 * _err(n45)) ** 2
        + (grad_n45p * _err(n45_p)) ** 2
    ) / 16.0
    stderr = {"j1": _err(j00), "j2": _err(j90), "j3": math.sqrt(var_j3)}
    if j4 is not None:
        # j4 = 2 |j3| sqrt(j1 j2): dj4/dj3 = 2 sqrt(j1 j2) (up to sign),
        # dj4/dj1 = |j3| sqrt(j2/j1), dj4/dj2 symmetric.
        stderr["j4"] = math.sqrt(
            (2.0 * math.sqrt(j1 * j2) * stderr["j3"]) ** 2
            + (abs(j3) * math.sqrt(j2 / j1) * stderr["j1"]) ** 2
            + (abs(j3) * math.sqrt(j1 / j2) * stderr["j2"]) ** 2
        )
    return inv, stderr


def reconstruct_scheme2(records) -> tuple[InvariantSet, dict | None, dict]:
    """Protocol-2 reconstruction from a standard-form transcript.

    Returns the invariant set, the propagated standard errors (None for
    exact records) and the auxiliary cross-block pieces
    {ms_real, ms_imag, mc_magnitude}.
    """
    n1r = _pick(records, 0.0, 0.0, "N")
    n2r = _pick(records, math.pi / 2, 0.0, "N")
    n45 = _pick(records, math.pi / 4, 0.0, "N")
    n45_p = _pick(records, math.pi / 4, math.pi / 2, "N")
    j45 = _pick(records, math.pi / 4, 0.0, "J")

    n1t, n2t = n1r.value, n2r.value
    if n1t <= 0.0 or n2t <= 0.0:
        raise ReconstructionError(f"non-positive occupations: {n1t}, {n2t}")
    j1, j2 = n1t**2, n2t**2

    mc_sq = n45.value**2 - j45.value
    if mc_sq < 0.0:
        if mc_sq < -MC2_CLAMP_FAIL:
            raise ReconstructionError(
                f"|m~c|^2 reconstructed as {mc_sq}, beyond the clamp threshold"
            )
        if mc_sq < -MC2_CLAMP_WARN:
            warnings.warn(
                f"clamping negative |m~c|^2 = {mc_sq} to zero", stacklevel=2
            )
        mc_sq = 0.0

    ms_re = (n1t + n2t) / 2.0 - n45.value
    ms_im = (n1t + n2t) / 2.0 - n45_p.value
    ms_sq = ms_re**2 + ms_im**2
    j3 = ms_sq - mc_sq
    j4 = 2.0 * n1t * n2t * (ms_sq + mc_sq)
    inv = InvariantSet(j1=j1, j2=j2, j3=j3, j4=j4)
    aux = {"ms_real": ms_re, "ms_imag": ms_im, "mc_magnitude": math.sqrt(mc_sq)}

    if all(rec.stderr is None for rec in records):
        return inv, None, aux
    # First-order propagation, records treated as independent:
    #   j1 = n1^2, j2 = n2^2
    #   mc^2 = n45^2 - j45
    #   ms_re = (n1 + n2)/2 - n45,  ms_im = (n1 + n2)/2 - n45p
    #   j3 = ms^2 - mc^2,  j4 = 2 n1 n2 (ms^2 + mc^2)
    e_n1, e_n2 = _err(n1r), _err(n2r)
    e_n45, e_n45p, e_j45 = _err(n45), _err(n45_p), _err(j45)
    var_mc2 = (2.0 * n45.value * e_n45) ** 2 + e_j45**2
    var_msre = e_n1**2 / 4.0 + e_n2**2 / 4.0 + e_n45**2
    var_msim = e_n1**2 / 4.0 + e_n2**2 / 4.0 + e_n45p**2
    var_ms2 = (2.0 * ms_re) ** 2 * var_msre + (2.0 * ms_im) ** 2 * var_msim
    stderr = {
        "j1": 2.0 * n1t * e_n1,
        "j2": 2.0 * n2t * e_n2,
        "j3": math.sqrt(var_ms2 + var_mc2),
        "j4": math.sqrt(
            (2.0 * n2t * (ms_sq + mc_sq) * e_n1) ** 2
            + (2.0 * n1t * (ms_sq + mc_sq) * e_n2) ** 2
            + (2.0 * n1t * n2t) ** 2 * (var_ms2 + var_mc2)
        ),
    }
    return inv, stderr, aux


def reconstruct_from_transcript(
    records, scheme: str, special_form: str | None = None
):
    """Replay a stored transcript through the matching reconstruction."""
    if scheme == "scheme1":
        return reconstruct_scheme1(records, special_form)
    if scheme == "scheme2":
        inv, stderr, _ = reconstruct_scheme2(records)
        return inv, stderr
    raise ValueError(f"unknown scheme {scheme!r}")


def scheme1(
    v: ModeCovariance,
    det: DetectorModel = DetectorModel(),
    seed=0,
    sym_tol: float = DEFAULT_SYM_TOL,
) -> SchemeResult:
    """Run protocol 1: J1, J2, J3 from ten single-mode readings.

    If the input is block-diagonal with a diagonal or antidiagonal cross
    block, that structural fact (recorded in ``special_form``) upgrades the
    result with the exact J4; otherwise the entanglement report contains
    the symmetric lower bound only.
    """
    observations, records = _run_plan(v, scheme1_plan(), det, seed)
    special = None
    if abs(v.m1) <= 1e-9 * max(1.0, v.n1) and abs(v.m2) <= 1e-9 * max(1.0, v.n2):
        special = detect_special_form(v)
    inv, stderr = reconstruct_scheme1(records, special)
    return SchemeResult(
        scheme="scheme1",
        invariants=inv,
        entanglement=entanglement_report(inv, sym_tol),
        observations=observations,
        transcript=records,
        invariant_stderr=stderr,
        status="full" if inv.j4 is not None else "lower-bound-only",
        special_form=special,
    )


def scheme2(
    v: ModeCovariance,
    det: DetectorModel = DetectorModel(),
    seed=0,
    sym_tol: float = DEFAULT_SYM_TOL,
) -> SchemeResult:
    """Run protocol 2: all four invariants after standard-form preparation.

    The local preparation uses only the single-mode blocks of ``v`` (never
    the cross correlations); the bench then measures the transformed state
    at four settings and reconstructs J1..J4 plus the cross-block pieces.
    """
    prep = standard_form_prep(v)
    observations, records = _run_plan(prep.vt, scheme2_plan(), det, seed)
    inv, stderr, aux = reconstruct_scheme2(records)
    return SchemeResult(
        scheme="scheme2",
        invariants=inv,
        entanglement=entanglement_report(inv, sym_tol),
        observations=observations,
        transcript=records,
        invariant_stderr=stderr,
        status="full",
        ms_real=aux["ms_real"],
        ms_imag=aux["ms_imag"],
        mc_magnitude=aux["mc_magnitude"],
        residual_m1=prep.residual_m1,
        residual_m2=prep.residual_m2,
    )


def consistency_check(
    s1: SchemeResult, s2: SchemeResult, tol: float = 1e-9
) -> ConsistencyReport:
    """Compare the invariants both protocols can reconstruct (J1, J2, J3)."""
    d1 = abs(s1.invariants.j1 - s2.invariants.j1)
    d2 = abs(s1.invariants.j2 - s2.invariants.j2)
    d3 = abs(s1.invariants.j3 - s2.invariants.j3)
    max_delta = max(d1, d2, d3)
    return ConsistencyReport(
        delta_j1=d1,
        delta_j2=d2,
        delta_j3=d3,
        max_delta=max_delta,
        tol=tol,
        within_tolerance=max_delta <= tol,
    )
