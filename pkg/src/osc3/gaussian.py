"""Vacuum Gaussian kernel of the three oscillators and its partial traces.

The total density matrix is

    rho(x, x') = norm2 * exp(-x^T G x - x'^T G* x'),

with the complex symmetric ``G = U^T diag(v1, v+, v-) U / 2``.  Tracing out
some coordinates is a Gaussian integral; the result is again Gaussian,

    rho_red(x, x') ~ exp(-x^T P x - x'^T P* x' + 2 x^T Q x'),

with ``Q`` Hermitian.  The closed-form coefficient sets below are the
expanded versions of exactly this Schur-complement computation, which is
kept (:func:`marginalize_generic`) as an independent route and as the
fallback on degenerate coupling configurations.

Index convention: oscillators are numbered 1, 2, 3 (A, B, C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ermakov import ErmakovState
from .errors import DomainError, NumericalError
from .model import ModeBasis, x_pm, y_pm, z_pm

SCHUR_COND_LIMIT = 1e12


@dataclass(frozen=True)
class FullKernel:
    g: np.ndarray = field(repr=False)
    norm2: float
    basis: ModeBasis
    modes: tuple[ErmakovState, ErmakovState, ErmakovState]

    @property
    def wprod(self) -> float:
        """``omega'_1 * omega'_+ * omega'_-``."""
        return math.prod(m.omega_prime for m in self.modes)


@dataclass(frozen=True)
class ReducedKernel1:
    """One-mode kernel

        norm * exp(-[(r1 - i i1) x^2 + (r1 + i i1) x'^2 - 2 y x x'] / omega).
    """

    omega: float
    y: float
    r1: float
    i1: float
    norm: float
    wprod: float
    source: str = "closed"

    def density(self, x, xp):
        x = np.asarray(x)
        xp = np.asarray(xp)
        expo = (self.r1 - 1j * self.i1) * x**2 + (self.r1 + 1j * self.i1) * xp**2 - 2.0 * self.y * x * xp
        return self.norm * np.exp(-expo / self.omega)

    def trace(self) -> float:
        """Analytic ``int rho(x, x) dx``."""
        return self.norm * math.sqrt(math.pi * self.omega / (2.0 * (self.r1 - self.y)))


@dataclass(frozen=True)
class ReducedKernel2:
    """Two-mode kernel ``norm * exp(-Gamma / a)`` with

        Gamma = (al1 - i be1) x1^2 + (al1 + i be1) y1^2
              + (al2 - i be2) x2^2 + (al2 + i be2) y2^2
              + 2 (al3 - i be3) x1 x2 + 2 (al3 + i be3) y1 y2
              - 2 ga11 x1 y1 - 2 ga22 x2 y2
              - 2 (al4 - i be4) x1 y2 - 2 (al4 + i be4) x2 y1.
    """

    a: float
    alpha: tuple[float, float, float, float]
    beta: tuple[float, float, float, float]
    gamma11: float
    gamma22: float
    norm: float
    wprod: float
    source: str = "closed"

    def exponent_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """``(P, Q)`` with ``rho ~ exp(-x.P.x - y.P*.y + 2 x.Q.y)``."""
        a1, a2, a3, a4 = self.alpha
        b1, b2, b3, b4 = self.beta
        p = np.array([[a1 - 1j * b1, a3 - 1j * b3], [a3 - 1j * b3, a2 - 1j * b2]]) / self.a
        q = np.array([[self.gamma11, a4 - 1j * b4], [a4 + 1j * b4, self.gamma22]]) / self.a
        return p, q

    def density(self, x1, x2, y1, y2):
        a1, a2, a3, a4 = self.alpha
        b1, b2, b3, b4 = self.beta
        gam = (
            (a1 - 1j * b1) * x1**2
            + (a1 + 1j * b1) * y1**2
            + (a2 - 1j * b2) * x2**2
            + (a2 + 1j * b2) * y2**2
            + 2 * (a3 - 1j * b3) * x1 * x2
            + 2 * (a3 + 1j * b3) * y1 * y2
            - 2 * self.gamma11 * x1 * y1
            - 2 * self.gamma22 * x2 * y2
            - 2 * (a4 - 1j * b4) * x1 * y2
            - 2 * (a4 + 1j * b4) * x2 * y1
        )
        return self.norm * np.exp(-gam / self.a)

    def positivity_minor(self) -> float:
        """``(al1 - ga11)(al2 - ga22) - (al3 - al4)^2``."""
        a1, a2, a3, a4 = self.alpha
        return (a1 - self.gamma11) * (a2 - self.gamma22) - (a3 - a4) ** 2

    def trace(self) -> float:
        return self.norm * math.pi * self.a / (2.0 * math.sqrt(self.positivity_minor()))


# ---------------------------------------------------------------------------
# full kernel


def generic_g(basis: ModeBasis, modes: Sequence[ErmakovState]) -> np.ndarray:
    v = np.array([m.v for m in modes])
    u = basis.u
    return 0.5 * (u.T * v) @ u


def closed_form_g(basis: ModeBasis, modes: Sequence[ErmakovState]) -> np.ndarray:
    if basis.degenerate:
        raise DomainError("closed-form G needs a non-degenerate basis")
    c, z = basis.couplings, basis.z
    j12, j13, j23 = c.j12, c.j13, c.j23
    v1, vp, vm = (m.v for m in modes)
    ap2, am2 = basis.a_plus**2, basis.a_minus**2
    d = j13 - j23
    p1, p2 = -j12 + j23 - z, j12 - j13 + z  # components of v+ / A+
    m1, m2 = -j12 + j23 + z, j12 - j13 - z  # components of v- / A-
    g = np.empty((3, 3), dtype=complex)
    g[0, 0] = 0.5 * (v1 / 3 + vp * ap2 * p1**2 + vm * am2 * m1**2)
    g[1, 1] = 0.5 * (v1 / 3 + vp * ap2 * p2**2 + vm * am2 * m2**2)
    g[2, 2] = 0.5 * (v1 / 3 + (vp * ap2 + vm * am2) * d**2)
    g[0, 1] = g[1, 0] = 0.5 * (v1 / 3 + vp * ap2 * p1 * p2 + vm * am2 * m1 * m2)
    g[0, 2] = g[2, 0] = 0.5 * (v1 / 3 + (vp * ap2 * p1 + vm * am2 * m1) * d)
    g[1, 2] = g[2, 1] = 0.5 * (v1 / 3 + (vp * ap2 * p2 + vm * am2 * m2) * d)
    return g


def build_full_kernel(basis: ModeBasis, modes: Sequence[ErmakovState]) -> FullKernel:
    """Total vacuum kernel; closed-form entries unless the basis is degenerate.

    The time-dependent phases of the three mode wavefunctions multiply
    ``psi`` and ``psi*`` with opposite signs and drop out here.
    """
    modes = tuple(modes)
    if len(modes) != 3:
        raise DomainError("need exactly three mode states (1, +, -)")
    g = generic_g(basis, modes) if basis.degenerate else closed_form_g(basis, modes)
    wprod = math.prod(m.omega_prime for m in modes)
    return FullKernel(g, math.sqrt(wprod / math.pi**3), basis, modes)


# ---------------------------------------------------------------------------
# generic marginalization


def marginalize_generic(k: FullKernel, keep: Sequence[int]):
    """Trace out every oscillator not in ``keep`` (1-based indices).

    Returns a :class:`ReducedKernel1` for one kept oscillator and a
    :class:`ReducedKernel2` for two, with coefficients in the same
    conventions as the closed forms.
    """
    keep = tuple(int(i) - 1 for i in keep)
    if len(keep) not in (1, 2) or len(set(keep)) != len(keep) or not all(0 <= i < 3 for i in keep):
        raise DomainError(f"keep must be one or two distinct indices from 1..3, got {keep}")
    traced = tuple(i for i in range(3) if i not in keep)
    g = k.g
    g_kk = g[np.ix_(keep, keep)]
    g_kt = g[np.ix_(keep, traced)]
    m = 2.0 * g[np.ix_(traced, traced)].real
    cond = np.linalg.cond(m)
    if not cond < SCHUR_COND_LIMIT:
        raise NumericalError(f"traced block is ill-conditioned (cond = {cond:.3g})")
    minv = np.linalg.inv(m)
    p = g_kk - g_kt @ minv @ g_kt.T
    q = g_kt @ minv @ g_kt.conj().T
    norm = k.norm2 * math.pi ** (len(traced) / 2) / math.sqrt(np.linalg.det(m))
    wprod = k.wprod
    if len(keep) == 1:
        p, q = p[0, 0], q[0, 0].real
        omega = wprod / (2.0 * (p.real - q))
        return ReducedKernel1(
            omega=omega,
            y=q * omega,
            r1=p.real * omega,
            i1=-p.imag * omega,
            norm=norm,
            wprod=wprod,
            source="generic",
        )
    a = float(m[0, 0])
    pa, qa = p * a, q * a
    return ReducedKernel2(
        a=a,
        alpha=(pa[0, 0].real, pa[1, 1].real, pa[0, 1].real, qa[0, 1].real),
        beta=(-pa[0, 0].imag, -pa[1, 1].imag, -pa[0, 1].imag, -qa[0, 1].imag),
        gamma11=qa[0, 0].real,
        gamma22=qa[1, 1].real,
        norm=norm,
        wprod=wprod,
        source="generic",
    )


# ---------------------------------------------------------------------------
# closed forms


def _mode_terms(k: FullKernel):
    m1, mp, mm = k.modes
    return (
        (m1.omega_prime, mp.omega_prime, mm.omega_prime),
        (m1.rate, mp.rate, mm.rate),
        (m1.v, mp.v, mm.v),
    )


def _re2(a: complex, b: complex) -> float:
    """``a b* + a* b``."""
    return 2.0 * (a * b.conjugate()).real


def reduce_keep_third(k: FullKernel) -> ReducedKernel1:
    """Reduced state of oscillator 3 (C) after tracing out 1 and 2."""
    if k.basis.degenerate:
        return marginalize_generic(k, (3,))
    b = k.basis
    c, z = b.couplings, b.z
    (w1, wp, wm), (r1, rp, rm), (v1, vp, vm) = _mode_terms(k)
    ap2, am2 = b.a_plus**2, b.a_minus**2
    d = c.j13 - c.j23
    zp, zm = z_pm(c, z)
    wprod = w1 * wp * wm
    omega = (ap2 * zp**2 * w1 * wp + am2 * zm**2 * w1 * wm + wp * wm) / 3.0
    y = (
        abs(v1) ** 2 / 36.0 * (ap2 * zp**2 * wp + am2 * zm**2 * wm)
        + d**2 * w1 / 12.0 * (ap2**2 * zp**2 * abs(vp) ** 2 + am2**2 * zm**2 * abs(vm) ** 2)
        + z**2 * ap2 * am2 * d**4 * (ap2 * abs(vp) ** 2 * wm + am2 * wp * abs(vm) ** 2)
        + ap2 * am2 / 6.0 * d**2
        * (
            0.5 * zp * zm * w1 * _re2(vp, vm)
            - z * zp * wp * _re2(v1, vm)
            + z * zm * wm * _re2(v1, vp)
        )
    )
    i1 = ap2 * am2 * d**2 * z * (zp * w1 * wp * rm - zm * w1 * rp * wm + 2.0 * z * r1 * wp * wm)
    return ReducedKernel1(
        omega=omega,
        y=y,
        r1=0.5 * wprod + y,
        i1=i1,
        norm=math.sqrt(wprod / (math.pi * omega)),
        wprod=wprod,
    )


def reduce_keep_first(k: FullKernel) -> ReducedKernel1:
    """Reduced state of oscillator 1 (A) after tracing out 2 and 3."""
    if k.basis.degenerate:
        return marginalize_generic(k, (1,))
    b = k.basis
    c, z = b.couplings, b.z
    j12, j13, j23 = c.j12, c.j13, c.j23
    (w1, wp, wm), (r1, rp, rm), (v1, vp, vm) = _mode_terms(k)
    ap2, am2 = b.a_plus**2, b.a_minus**2
    d = j13 - j23
    xp, xm = x_pm(c, z)
    p1 = -j12 + j23 - z
    m1 = -j12 + j23 + z
    wprod = w1 * wp * wm
    omega = (ap2 * xp**2 * w1 * wp + am2 * xm**2 * w1 * wm + wp * wm) / 3.0
    y = (
        abs(v1) ** 2 / 36.0 * (ap2 * xp**2 * wp + am2 * xm**2 * wm)
        + w1 / 12.0 * (ap2**2 * xp**2 * p1**2 * abs(vp) ** 2 + am2**2 * xm**2 * m1**2 * abs(vm) ** 2)
        + ap2 * am2 * z**2 * d**2 * (ap2 * p1**2 * abs(vp) ** 2 * wm + am2 * m1**2 * wp * abs(vm) ** 2)
        + ap2 * am2 / 4.0 * d
        * (
            -(j12 - j13) * m1 * p1 * w1 * _re2(vp, vm)
            + 2.0 / 3.0 * z * xp * m1 * wp * _re2(v1, vm)
            - 2.0 / 3.0 * z * xm * p1 * wm * _re2(v1, vp)
        )
    )
    i1 = -ap2 * am2 * z * d * (
        xp * m1 * w1 * wp * rm - xm * p1 * w1 * rp * wm - 2.0 * z * d * r1 * wp * wm
    )
    return ReducedKernel1(
        omega=omega,
        y=y,
        r1=0.5 * wprod + y,
        i1=i1,
        norm=math.sqrt(wprod / (math.pi * omega)),
        wprod=wprod,
    )


def reduce_drop_first(k: FullKernel) -> ReducedKernel2:
    """Reduced state of oscillators 2 and 3 (B, C) after tracing out 1."""
    if k.basis.degenerate:
        return marginalize_generic(k, (2, 3))
    b = k.basis
    c, z = b.couplings, b.z
    j12, j13, j23 = c.j12, c.j13, c.j23
    (w1, wp, wm), (r1, rp, rm), (v1, vp, vm) = _mode_terms(k)
    ap2, am2 = b.a_plus**2, b.a_minus**2
    d = j13 - j23
    zp, zm = z_pm(c, z)
    yp, ym = y_pm(c, z)
    p1, p2 = -j12 + j23 - z, j12 - j13 + z
    m1, m2 = -j12 + j23 + z, j12 - j13 - z
    n1, n2 = j12 - 2 * j13 + j23 - z, j12 - 2 * j13 + j23 + z
    v1sq, vpsq, vmsq = abs(v1) ** 2, abs(vp) ** 2, abs(vm) ** 2
    s1p, s1m, spm = w1 * wp + r1 * rp, w1 * wm + r1 * rm, wp * wm + rp * rm
    wprod = w1 * wp * wm

    a = w1 / 3.0 + wp * ap2 * p1**2 + wm * am2 * m1**2

    al1 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * p1**2 * p2**2
        + 0.25 * vmsq * am2**2 * m1**2 * m2**2
        + ap2 / 6.0 * (zp**2 * w1 * wp + s1p * p2 * p1)
        + am2 / 6.0 * (zm**2 * w1 * wm + s1m * m2 * m1)
        + ap2 * am2 / 2.0 * (4 * z**2 * d**2 * wp * wm + spm * p2 * m2 * m1 * p1)
    )
    be1 = (
        ap2 / 6.0 * zp * (w1 * rp * p2 - r1 * wp * p1)
        + am2 / 6.0 * zm * (w1 * rm * m2 - r1 * wm * m1)
        + ap2 * am2 * z * d * (wp * rm * m2 * p1 - rp * wm * p2 * m1)
    )
    al2 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * d**2 * p1**2
        + 0.25 * vmsq * am2**2 * d**2 * m1**2
        + ap2 / 6.0 * (yp**2 * w1 * wp + s1p * d * p1)
        + am2 / 6.0 * (ym**2 * w1 * wm + s1m * d * m1)
        + ap2 * am2 / 2.0 * d**2 * (4 * z**2 * wp * wm + spm * m1 * p1)
    )
    be2 = (
        ap2 / 6.0 * yp * (w1 * rp * d - r1 * wp * p1)
        + am2 / 6.0 * ym * (w1 * rm * d - r1 * wm * m1)
        - ap2 * am2 * z * d**2 * (wp * rm * p1 - rp * wm * m1)
    )
    al3 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * d * p2 * p1**2
        + 0.25 * vmsq * am2**2 * d * m2 * m1**2
        + ap2 / 12.0 * (2 * zp * yp * w1 * wp - s1p * p1**2)
        + am2 / 12.0 * (2 * zm * ym * w1 * wm - s1m * m1**2)
        + ap2 * am2 / 2.0 * d * (-4 * z**2 * d * wp * wm + spm * (j12 - j13) * m1 * p1)
    )
    be3 = (
        ap2 / 12.0 * (w1 * rp * (2 * d * p2 + p1**2) + 3 * r1 * wp * p1**2)
        + am2 / 12.0 * (w1 * rm * (2 * d * m2 + m1**2) + 3 * r1 * wm * m1**2)
        + ap2 * am2 / 2.0 * z * d * (-wp * rm * p1 * n1 + rp * wm * m1 * n2)
    )
    al4 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * d * p2 * p1**2
        + 0.25 * vmsq * am2**2 * d * m2 * m1**2
        - ap2 / 12.0 * p1**2 * s1p
        - am2 / 12.0 * m1**2 * s1m
        + ap2 * am2 / 2.0 * (j12 - j13) * d * m1 * p1 * spm
    )
    be4 = (
        ap2 / 12.0 * p1 * n2 * (w1 * rp - r1 * wp)
        + am2 / 12.0 * m1 * n1 * (w1 * rm - r1 * wm)
        - ap2 * am2 / 2.0 * z * d * m1 * p1 * (wp * rm - rp * wm)
    )
    ga11 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * p2**2 * p1**2
        + 0.25 * vmsq * am2**2 * m2**2 * m1**2
        + ap2 / 12.0 * _re2(v1, vp) * p2 * p1
        + am2 / 12.0 * _re2(v1, vm) * m2 * m1
        + ap2 * am2 / 4.0 * _re2(vp, vm) * p2 * m2 * m1 * p1
    )
    ga22 = (
        v1sq / 36.0
        + 0.25 * vpsq * ap2**2 * d**2 * p1**2
        + 0.25 * vmsq * am2**2 * d**2 * m1**2
        + ap2 / 12.0 * _re2(v1, vp) * d * p1
        + am2 / 12.0 * _re2(v1, vm) * d * m1
        + ap2 * am2 / 4.0 * _re2(vp, vm) * d**2 * m1 * p1
    )
    return ReducedKernel2(
        a=a,
        alpha=(al1, al2, al3, al4),
        beta=(be1, be2, be3, be4),
        gamma11=ga11,
        gamma22=ga22,
        norm=math.sqrt(wprod / (math.pi**2 * a)),
        wprod=wprod,
    )
