"""Separability tests and entanglement measures from symplectic invariants.

Everything here consumes an :class:`~gaussbench.states.InvariantSet` only;
no covariance matrix is touched.  Logarithms are base 2 (bits).

* Simon's PPT-based criterion decides separability from the margin
  I1 I2 + (1 - |I3|)^2 - I4 - I1 - I2 together with the sign of I3
  (positively correlated cross blocks, I3 >= 0, are always separable for
  physical states).
* The entanglement of formation has a closed form for symmetric states
  (I1 = I2); dropping I4 from its inner radical can only lower the result,
  which gives a cheap lower bound that works without the fourth invariant.
* The logarithmic negativity follows from the smallest symplectic
  eigenvalue of the partially transposed state, which depends on gamma only
  through Delta~ = I1 + I2 - 2 I3 and det gamma = I1 I2 + I3^2 - I4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotSymmetricError, NumericalDomainError
from .states import InvariantSet

__all__ = [
    "EntanglementReport",
    "simon_separable",
    "eof_symmetric",
    "eof_lower_bound",
    "log_negativity",
    "entanglement_report",
]

#: Small negatives tolerated (and clamped) in the EoF radicands.
EOF_RADICAND_ATOL = 1e-12

#: Tolerance on the negativity radicand Delta~^2 - 4 det(gamma).
NEGATIVITY_RADICAND_ATOL = 1e-9

#: Default relative tolerance for treating I1 and I2 as equal.
DEFAULT_SYM_TOL = 1e-6


@dataclass(frozen=True)
class EntanglementReport:
    """Separability verdict and measures; fields are None when undecidable.

    ``eof``/``eof_lower_bound`` are absent for non-symmetric states, and
    everything that needs the fourth invariant (``separable``,
    ``simon_lhs_minus_rhs``, ``log_negativity``, ``nu_tilde_minus``) is
    absent when the invariant set lacks it.
    """

    separable: bool | None
    simon_lhs_minus_rhs: float | None
    eof: float | None
    eof_lower_bound: float | None
    log_negativity: float | None
    nu_tilde_minus: float | None


def simon_separable(inv: InvariantSet) -> tuple[bool, float]:
    """Evaluate the separability inequality.

    Returns ``(separable, margin)`` with
    margin = I1 I2 + (1 - |I3|)^2 - I4 - I1 - I2; the state is separable
    iff I3 >= 0 or the margin is non-negative.
    """
    i1, i2, i3 = inv.i1, inv.i2, inv.i3
    i4 = inv.require_i4()
    margin = i1 * i2 + (1.0 - abs(i3)) ** 2 - i4 - i1 - i2
    return bool(i3 >= 0.0 or margin >= 0.0), margin


def _require_symmetric(inv: InvariantSet, sym_tol: float) -> None:
    if abs(inv.i1 - inv.i2) > sym_tol * max(inv.i1, inv.i2):
        raise NotSymmetricError(
            f"I1 = {inv.i1} and I2 = {inv.i2} differ beyond sym_tol = {sym_tol}"
        )


def _clamped_sqrt(value: float, what: str) -> float:
    if value < -EOF_RADICAND_ATOL:
        raise NumericalDomainError(f"{what} is negative beyond tolerance: {value}")
    return math.sqrt(max(value, 0.0))


def _x_parameter(i1: float, i3: float, i4: float) -> float:
    """Inner argument x = sqrt(I1 + |I3| - sqrt(I4 + 2 I1 |I3|)).

    For a two-mode squeezed vacuum this reduces to exp(-2r); generally it
    plays the role of an effective squeeze factor, with x >= 1 meaning no
    entanglement is seen by the symmetric closed form.
    """
    inner = _clamped_sqrt(i4 + 2.0 * i1 * abs(i3), "EoF inner radicand")
    x_sq = i1 + abs(i3) - inner
    if x_sq <= 0.0:
        if x_sq < -EOF_RADICAND_ATOL:
            raise NumericalDomainError(f"EoF x^2 is negative: {x_sq}")
        raise NumericalDomainError("EoF diverges (x = 0) at this invariant set")
    return math.sqrt(x_sq)


def _entropy_of_squeeze_factor(x: float) -> float:
    """E(x) = c+ log2 c+ - c- log2 c-, c± = (x^-1/2 ± x^1/2)^2 / 4.

    Strictly decreasing on (0, 1) and zero at x = 1; callers clamp x >= 1
    to zero output.
    """
    if x >= 1.0:
        return 0.0
    root = math.sqrt(x)
    c_plus = (1.0 / root + root) ** 2 / 4.0
    c_minus = (1.0 / root - root) ** 2 / 4.0
    value = c_plus * math.log2(c_plus)
    if c_minus > 0.0:
        value -= c_minus * math.log2(c_minus)
    return value


def eof_symmetric(inv: InvariantSet, sym_tol: float = DEFAULT_SYM_TOL) -> float:
    """Entanglement of formation (bits) for a symmetric state (I1 = I2).

    Raises :class:`NotSymmetricError` when |I1 - I2| exceeds
    ``sym_tol * max(I1, I2)``; callers should fall back to the logarithmic
    negativity in that case.
    """
    _require_symmetric(inv, sym_tol)
    return _entropy_of_squeeze_factor(_x_parameter(inv.i1, inv.i3, inv.require_i4()))


def eof_lower_bound(inv: InvariantSet, sym_tol: float = DEFAULT_SYM_TOL) -> float:
    """Lower bound on the symmetric EoF obtained by zeroing I4.

    Since the inner radical grows with I4 and E(x) decreases with x, using
    I4 = 0 can only underestimate; the bound needs just I1 and I3 and so
    works for invariant sets whose fourth entry is unknown.
    """
    _require_symmetric(inv, sym_tol)
    return _entropy_of_squeeze_factor(_x_parameter(inv.i1, inv.i3, 0.0))


def log_negativity(inv: InvariantSet) -> tuple[float, float]:
    """Logarithmic negativity (bits) and the PPT symplectic eigenvalue.

    nu~_-^2 = (Delta~ - sqrt(Delta~^2 - 4 det gamma))/2 with
    Delta~ = I1 + I2 - 2 I3; E_N = max(0, -log2 nu~_-).
    """
    det_gamma = inv.quad_determinant()
    delta_tilde = inv.i1 + inv.i2 - 2.0 * inv.i3
    radicand = delta_tilde * delta_tilde - 4.0 * det_gamma
    if radicand < 0.0:
        if radicand < -NEGATIVITY_RADICAND_ATOL * max(1.0, delta_tilde * delta_tilde):
            raise NumericalDomainError(
                f"negativity radicand is negative beyond tolerance: {radicand}"
            )
        radicand = 0.0
    nu_sq = (delta_tilde - math.sqrt(radicand)) / 2.0
    if nu_sq <= 0.0:
        raise NumericalDomainError(f"PPT symplectic eigenvalue squared <= 0: {nu_sq}")
    nu_minus = math.sqrt(nu_sq)
    return max(0.0, -math.log2(nu_minus)), nu_minus


def entanglement_report(
    inv: InvariantSet, sym_tol: float = DEFAULT_SYM_TOL
) -> EntanglementReport:
    """Assemble all verdicts/measures computable from the given invariants.

    Fields the invariant set cannot support stay None: everything beyond
    the lower bound needs J4, the EoF entries need I1 = I2, and any of the
    derived measures may be undefined when finite-shot noise pushed the
    reconstructed set outside the physical region.
    """
    eof = bound = negativity = nu_minus = margin = None
    separable = None
    try:
        bound = eof_lower_bound(inv, sym_tol)
    except (NotSymmetricError, NumericalDomainError):
        bound = None
    if inv.j4 is not None:
        separable, margin = simon_separable(inv)
        try:
            negativity, nu_minus = log_negativity(inv)
        except NumericalDomainError:
            negativity = nu_minus = None
        try:
            eof = eof_symmetric(inv, sym_tol)
        except (NotSymmetricError, NumericalDomainError):
            eof = None
    return EntanglementReport(
        separable=separable,
        simon_lhs_minus_rhs=margin,
        eof=eof,
        eof_lower_bound=bound,
        log_negativity=negativity,
        nu_tilde_minus=nu_minus,
    )
