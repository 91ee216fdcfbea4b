"""Ermakov scale factors for a harmonic mode with time-dependent frequency.

Each normal mode with squared frequency ``lam(t)`` evolves its vacuum by a
scale factor ``b(t)`` obeying

    b'' + lam(t) b = lam(0) / b**3,     b(0) = 1, b'(0) = 0.

For a sudden quench the solution is closed form; other profiles are
integrated numerically with an embedded 5(4) Runge-Kutta pair.  Only the
vacuum is tracked, so the accumulated phase ``int dt / b**2`` is never
needed: it cancels in the density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import BPoly

from .errors import DomainError, IntegrationError

B_FLOOR = 1e-8


@dataclass(frozen=True)
class ErmakovState:
    """Scale factor of one mode at one instant.

    ``omega_prime = sqrt(lam(0)) / b**2`` is the instantaneous Gaussian width
    and ``v = omega_prime - 1j * bdot / b`` the complex exponent coefficient
    of the mode's vacuum wavefunction.
    """

    b: float
    bdot: float
    omega0sq: float

    @property
    def omega_prime(self) -> float:
        return math.sqrt(self.omega0sq) / (self.b * self.b)

    @property
    def rate(self) -> float:
        """``bdot / b``."""
        return self.bdot / self.b

    @property
    def v(self) -> complex:
        return complex(self.omega_prime, -self.rate)


def quench_scale(wi_sq: float, wf_sq: float, t):
    """Closed-form ``(b, bdot)`` after a sudden change ``wi_sq -> wf_sq``.

    Vectorized over ``t``.  For ``wf_sq < 0`` the cosine turns into a
    hyperbolic cosine.
    """
    if not wi_sq > 0.0:
        raise DomainError(f"initial squared frequency must be positive, got {wi_sq}")
    if wf_sq == 0.0:
        raise DomainError("a quench to zero frequency is not supported")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    amp = (wf_sq - wi_sq) / (2.0 * wf_sq)
    # amp * C + mean with amp + mean = 1, written via C - 1 so that b(0) = 1 exactly
    if wf_sq > 0.0:
        w = math.sqrt(wf_sq)
        b2 = 1.0 - 2.0 * amp * np.sin(w * t) ** 2
        dosc = -2.0 * w * np.sin(2.0 * w * t)
    else:
        w = math.sqrt(-wf_sq)
        b2 = 1.0 + 2.0 * amp * np.sinh(w * t) ** 2
        dosc = 2.0 * w * np.sinh(2.0 * w * t)
    b = np.sqrt(b2)
    bdot = amp * dosc / (2.0 * b)
    return b, bdot


def solve_quench(wi_sq: float, wf_sq: float, t: float) -> ErmakovState:
    b, bdot = quench_scale(wi_sq, wf_sq, t)
    return ErmakovState(float(b), float(bdot), float(wi_sq))


@dataclass(frozen=True)
class ModeProfile:
    """Squared frequency ``lam(t)`` of one normal mode.

    ``omegasq(t)`` honours the quench convention (initial value at exactly
    ``t = 0``); ``driving(t)`` is the value seen by the ODE for ``t > 0``,
    i.e. the right limit.
    """

    kind: str
    initial: float
    final: float
    times: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    func: Callable[[float], float] | None = field(default=None, compare=False, repr=False)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.initial > 0.0:
            raise DomainError(
                f"lam(0) = {self.initial} is not positive; the initial vacuum is not normalizable"
            )

    @classmethod
    def quench(cls, wi_sq: float, wf_sq: float) -> "ModeProfile":
        return cls("quench", float(wi_sq), float(wf_sq))

    @classmethod
    def constant(cls, w_sq: float) -> "ModeProfile":
        return cls("constant", float(w_sq), float(w_sq))

    @classmethod
    def tabulated(cls, times: Sequence[float], values: Sequence[float]) -> "ModeProfile":
        times = tuple(float(t) for t in times)
        values = tuple(float(v) for v in values)
        if len(times) < 2 or len(times) != len(values) or np.any(np.diff(times) <= 0):
            raise DomainError("tabulated profile needs matching, strictly increasing knots")
        if times[0] != 0.0:
            raise DomainError("tabulated profile must start at t = 0")
        return cls("tabulated", values[0], values[-1], times, values, breakpoints=times[1:-1])

    @classmethod
    def from_function(
        cls,
        func: Callable[[float], float],
        initial: float | None = None,
        breakpoints: Sequence[float] = (),
    ) -> "ModeProfile":
        """Arbitrary continuous profile; ``initial`` overrides ``func(0)``."""
        init = float(func(0.0)) if initial is None else float(initial)
        return cls("function", init, math.nan, func=func, breakpoints=tuple(breakpoints))

    def driving(self, t: float) -> float:
        if self.kind in ("quench", "constant"):
            return self.final
        if self.kind == "tabulated":
            return float(np.interp(t, self.times, self.values))
        return float(self.func(t))

    def omegasq(self, t: float) -> float:
        return self.initial if t == 0.0 else self.driving(t)


@dataclass(frozen=True)
class ErmakovTrajectory:
    """Dense solution of the Ermakov equation on ``[0, tmax]``.

    ``b`` is the quintic Hermite interpolant through the accepted
    Runge-Kutta steps, matching ``b``, ``bdot`` and ``bddot`` (from the ODE
    right-hand side) at every knot; ``bdot`` is its derivative.
    """

    profile: ModeProfile
    knots: np.ndarray = field(repr=False)
    b_knots: np.ndarray = field(repr=False)
    bdot_knots: np.ndarray = field(repr=False)
    bddot_knots: np.ndarray = field(repr=False)

    @property
    def tmax(self) -> float:
        return float(self.knots[-1])

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.tmax * (1 + 1e-14)):
            raise DomainError(f"time outside [0, {self.tmax}]")
        return t

    @cached_property
    def _b_spline(self) -> BPoly:
        derivs = np.column_stack([self.b_knots, self.bdot_knots, self.bddot_knots])
        return BPoly.from_derivatives(self.knots, derivs)

    @cached_property
    def _bdot_spline(self) -> BPoly:
        return self._b_spline.derivative()

    def b(self, t):
        return self._b_spline(self._check(t))

    def bdot(self, t):
        return self._bdot_spline(self._check(t))

    def state(self, t: float) -> ErmakovState:
        return ErmakovState(float(self.b(t)), float(self.bdot(t)), self.profile.initial)


@dataclass(frozen=True)
class QuenchTrajectory:
    """Closed-form counterpart of :class:`ErmakovTrajectory` for a quench."""

    profile: ModeProfile
    tmax: float

    def b(self, t):
        return quench_scale(self.profile.initial, self.profile.final, t)[0]

    def bdot(self, t):
        return quench_scale(self.profile.initial, self.profile.final, t)[1]

    def state(self, t: float) -> ErmakovState:
        return solve_quench(self.profile.initial, self.profile.final, t)


def solve_ode(profile: ModeProfile, tmax: float, reltol: float = 1e-10) -> ErmakovTrajectory:
    """Integrate the Ermakov equation from ``(b, bdot) = (1, 0)`` up to ``tmax``.

    Breakpoints of the profile are used as segment boundaries so the
    step-size control never straddles a kink.
    """
    if not 1e-13 <= reltol <= 1e-6:
        raise DomainError(f"reltol must lie in [1e-13, 1e-6], got {reltol}")
    if not tmax > 0.0:
        raise DomainError(f"tmax must be positive, got {tmax}")
    w0 = profile.initial

    def rhs(t, y):
        b, bd = y
        return (bd, -profile.driving(t) * b + w0 / b**3)

    def collapse(t, y):
        return y[0] - B_FLOOR

    collapse.terminal = True

    # cap the step so the dense output, and the bddot taken from it, stay
    # near the integration tolerance between the knots as well
    max_step = 4.0 * reltol**0.25 / math.sqrt(_frequency_scale(profile, tmax))
    edges = [0.0] + [t for t in profile.breakpoints if 0.0 < t < tmax] + [float(tmax)]
    ts, ys = [np.array([0.0])], [np.array([[1.0], [0.0]])]
    y0 = np.array([1.0, 0.0])
    for lo, hi in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(
            rhs, (lo, hi), y0, method="RK45",
            rtol=reltol,
            atol=reltol * 1e-2,
            max_step=max_step,
            events=collapse,
        )
        if sol.status == 1 or np.any(sol.y[0] < B_FLOOR):
            raise IntegrationError(f"scale factor fell below {B_FLOOR} near t = {sol.t[-1]:.6g}")
        if not sol.success:
            raise IntegrationError(sol.message)
        ts.append(sol.t[1:])
        ys.append(sol.y[:, 1:])
        y0 = sol.y[:, -1]
    t = np.concatenate(ts)
    y = np.concatenate(ys, axis=1)
    # right-hand limit at t = 0, where a quench switches lam
    lam = np.array([profile.driving(s) for s in np.maximum(t, np.nextafter(0.0, 1.0))])
    bddot = -lam * y[0] + w0 / y[0] ** 3
    return ErmakovTrajectory(profile, t, y[0], y[1], bddot)


def _frequency_scale(profile: ModeProfile, tmax: float) -> float:
    """Largest ``|lam|`` seen on ``[0, tmax]`` (floored at 1e-12)."""
    if profile.kind in ("quench", "constant"):
        vals = [profile.initial, profile.final]
    elif profile.kind == "tabulated":
        vals = [v for t, v in zip(profile.times, profile.values) if t <= tmax]
        vals.append(profile.driving(tmax))
    else:
        vals = [profile.initial] + [profile.driving(t) for t in np.linspace(0.0, tmax, 65)[1:]]
    return max(max(abs(v) for v in vals), 1e-12)
