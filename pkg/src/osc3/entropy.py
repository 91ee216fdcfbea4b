"""Purity, eigenvalue ladders and Renyi / von Neumann entropies of reduced kernels.

A one-mode Gaussian reduced state has eigenvalues ``(1 - xi) xi**n``; a
two-mode one factorizes into two such ladders ``xi1, xi2`` after a chain
of coordinate changes (phase removal, rotation, rescaling) that leaves a
Hermitian cross-coupling matrix ``kappa``.  Its real part is diagonalized
by one more rotation and its imaginary, antisymmetric part is folded in
through the two symplectic invariants.  All entropies follow from the ``xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidStateError
from .gaussian import ReducedKernel1, ReducedKernel2

DEFAULT_ALPHAS = (0.5, 2.0, 3.0)
NEG_XI_TOL = 1e-12
CHI_CLAMP = 1e-10


@dataclass(frozen=True)
class Spectrum1:
    xi: float
    epsilon: float

    def probabilities(self, n: int) -> np.ndarray:
        """First ``n`` eigenvalues ``(1 - xi) xi**k``."""
        return (1.0 - self.xi) * self.xi ** np.arange(n)


@dataclass(frozen=True)
class Spectrum2:
    xi1: float
    xi2: float
    chain: Mapping[str, object] = field(default_factory=dict, repr=False, compare=False)

    def probabilities(self, n: int) -> np.ndarray:
        """Largest ``n`` eigenvalues ``(1 - xi1)(1 - xi2) xi1**m xi2**k``, descending."""
        m = np.arange(n)
        p1 = (1.0 - self.xi1) * self.xi1**m
        p2 = (1.0 - self.xi2) * self.xi2**m
        return np.sort(np.outer(p1, p2).ravel())[::-1][:n]


@dataclass(frozen=True)
class EntropyReport:
    purity: float
    s_renyi: dict[float, float]
    s_von: float


# ---------------------------------------------------------------------------
# single-ladder formulas


def von_neumann(xi: float) -> float:
    """``-ln(1 - xi) - xi/(1 - xi) ln xi``; zero at ``xi = 0``."""
    if xi == 0.0:
        return 0.0
    if xi < 1e-300:
        return xi * (1.0 - math.log(xi))
    return -math.log1p(-xi) - xi / (1.0 - xi) * math.log(xi)


def renyi(xi: float, alpha: float) -> float:
    """``ln[(1 - xi)^alpha / (1 - xi^alpha)] / (1 - alpha)``."""
    if alpha <= 0.0:
        raise ValueError(f"Renyi order must be positive, got {alpha}")
    if alpha == 1.0:
        return von_neumann(xi)
    if xi == 0.0:
        return 0.0
    return (alpha * math.log1p(-xi) - math.log1p(-(xi**alpha))) / (1.0 - alpha)


def _ladder_purity(xi: float) -> float:
    return (1.0 - xi) / (1.0 + xi)


def _check_xi(xi: float) -> None:
    if not 0.0 <= xi < 1.0:
        raise InvalidStateError(f"xi = {xi} outside [0, 1)")


# ---------------------------------------------------------------------------
# one mode


def purity_one(k: ReducedKernel1) -> float:
    """``tr rho^2 = sqrt((R - Y) / (R + Y))``."""
    if not k.r1 > abs(k.y):
        raise InvalidStateError(f"R1 = {k.r1} must exceed |Y| = {abs(k.y)}")
    return math.sqrt(k.wprod / (2.0 * (k.r1 + k.y)))


def spectrum_one(k: ReducedKernel1) -> Spectrum1:
    r, y = k.r1, k.y
    if y < 0.0:
        if y < -NEG_XI_TOL * abs(r):
            raise InvalidStateError(f"Y = {y} is negative")
        y = 0.0
    if not r > y:
        raise InvalidStateError(f"R1 = {r} must exceed Y = {y}")
    root = math.sqrt((r - y) * (r + y))
    return Spectrum1(xi=y / (r + root), epsilon=2.0 * root / abs(k.omega))


def entropies_one(s: Spectrum1, alphas: Iterable[float] = DEFAULT_ALPHAS) -> EntropyReport:
    _check_xi(s.xi)
    return EntropyReport(
        purity=_ladder_purity(s.xi),
        s_renyi={float(a): renyi(s.xi, float(a)) for a in alphas},
        s_von=von_neumann(s.xi),
    )


def entropies_via_A(k: ReducedKernel1, alphas: Iterable[float] = DEFAULT_ALPHAS) -> EntropyReport:
    """Entropies of the (2,3) block read off the complementary one-mode state of 1.

    The total state is pure, so both sides of the bipartition share the
    same nonzero spectrum.
    """
    return entropies_one(spectrum_one(k), alphas)


# ---------------------------------------------------------------------------
# two modes


def purity_two(k: ReducedKernel2) -> float:
    a1, a2, a3, a4 = k.alpha
    g11, g22 = k.gamma11, k.gamma22
    s = a2 * a2 - g22 * g22
    q = a3 * a3 + a4 * a4
    n1 = a1 * s - a2 * q + 2.0 * g22 * a3 * a4
    n2 = g11 * s + g22 * q - 2.0 * a2 * a3 * a4
    den = n1 * n1 - n2 * n2
    if not (s > 0.0 and den > 0.0):
        raise InvalidStateError(f"degenerate purity denominators (a2^2-g22^2={s}, n1^2-n2^2={den})")
    return k.wprod * k.a / 4.0 * math.sqrt(s / den)


def spectrum_two(k: ReducedKernel2) -> Spectrum2:
    """Factorize the two-mode kernel into two geometric ladders."""
    a1, a2, a3, a4 = k.alpha
    b4 = k.beta[3]
    g11, g22 = k.gamma11, k.gamma22

    # rotation diagonalizing the real part of the quadratic form
    diff = a1 - a2
    eta = math.hypot(diff, 2.0 * a3)
    e = 4.0 * a3 * a3 / (eta + diff) if diff > 0.0 else eta - diff  # eta - (a1 - a2)
    n_rot = math.hypot(2.0 * a3, e)  # N^2 = 2 eta (eta - (a1 - a2))
    cs, sn = (2.0 * a3 / n_rot, e / n_rot) if n_rot > 0.0 else (1.0, 0.0)
    eta_p = 0.5 * (a1 + a2 + eta)
    eta_m = 0.5 * (a1 + a2 - eta)
    if not (eta_p > 0.0 and eta_m > 0.0):
        raise InvalidStateError(f"quadratic form not positive (eta+ = {eta_p}, eta- = {eta_m})")

    c11 = cs * cs * g11 + 2.0 * cs * sn * a4 + sn * sn * g22
    c22 = cs * cs * g22 - 2.0 * cs * sn * a4 + sn * sn * g11
    c12 = complex(cs * cs * a4 - cs * sn * (g11 - g22) - sn * sn * a4, -b4)

    k11 = c11 / eta_p
    k22 = c22 / eta_m
    k12 = c12 / math.sqrt(eta_p * eta_m)
    # eigenvalues of the Hermitian kappa as a complex unitary would give them;
    # only valid when kappa is real (b4 = 0), kept for diagnostics
    chi_h = math.sqrt((k11 - k22) ** 2 + 4.0 * abs(k12) ** 2)

    # kappa = kappa_r + i s J with J antisymmetric.  A real rotation
    # diagonalizes kappa_r (d1, d2) and leaves J alone; the remaining
    # antisymmetric coupling only shifts the sum of squared symplectic
    # eigenvalues, their product stays (1 + d1)(1 + d2) / ((1 - d1)(1 - d2)).
    s_im = k12.imag
    chi_r = math.hypot(k11 - k22, 2.0 * k12.real)
    d1 = 0.5 * (k11 + k22 + chi_r)
    d2 = 0.5 * (k11 + k22 - chi_r)
    if not d1 < 1.0:
        raise InvalidStateError(f"kappa eigenvalue {d1} >= 1: kernel is not trace class")
    r1 = (1.0 + d1) / (1.0 - d1)
    r2 = (1.0 + d2) / (1.0 - d2)
    tsum = r1 + r2 + 4.0 * s_im * s_im / ((1.0 - d1) * (1.0 - d2))
    tprod = r1 * r2
    t_hi = 0.5 * (tsum + math.sqrt(max(tsum * tsum - 4.0 * tprod, 0.0)))
    t_lo = tprod / t_hi
    chi_p = (t_hi - 1.0) / (t_hi + 1.0)
    chi_m = (t_lo - 1.0) / (t_lo + 1.0)

    chain = {
        "eta": eta,
        "eta_plus": eta_p,
        "eta_minus": eta_m,
        "N2": n_rot * n_rot,
        "c": np.array([[c11, c12], [c12.conjugate(), c22]]),
        "kappa": np.array([[k11, k12], [k12.conjugate(), k22]]),
        "kappa_real_eigs": (d1, d2),
        "chi": chi_h,
        "chi_plus_unitary": 0.5 * (k11 + k22 + chi_h),
        "chi_minus_unitary": 0.5 * (k11 + k22 - chi_h),
        "chi_plus": chi_p,
        "chi_minus": chi_m,
    }
    chi_p, chi_m = _clamp_chi(chi_p), _clamp_chi(chi_m)
    xi1 = chi_p / (1.0 + math.sqrt(1.0 - chi_p * chi_p))
    xi2 = chi_m / (1.0 + math.sqrt(1.0 - chi_m * chi_m))
    chain["epsilon1"] = 2.0 / k.a * math.sqrt(1.0 - chi_p * chi_p)
    chain["epsilon2"] = 2.0 / k.a * math.sqrt(1.0 - chi_m * chi_m)
    return Spectrum2(xi1=xi1, xi2=xi2, chain=chain)


def ladders_unitary_kappa(s: Spectrum2) -> tuple[float, float]:
    """Ladders from the eigenvalues of the full Hermitian ``kappa``.

    Exact only for real ``kappa``; with an imaginary cross term it misses
    that the unitary acts on both kernel arguments alike.  Kept as a
    diagnostic for the size of that error.
    """
    out = []
    for key in ("chi_plus_unitary", "chi_minus_unitary"):
        c = _clamp_chi(s.chain[key])
        out.append(c / (1.0 + math.sqrt(1.0 - c * c)))
    return out[0], out[1]


def _clamp_chi(x: float) -> float:
    if x >= 1.0:
        raise InvalidStateError(f"chi = {x} >= 1: kernel is not trace class")
    if x < 0.0:
        if x <= -CHI_CLAMP:
            raise InvalidStateError(f"chi = {x} is negative")
        return 0.0
    return x


def entropies_two(s: Spectrum2, alphas: Iterable[float] = DEFAULT_ALPHAS) -> EntropyReport:
    _check_xi(s.xi1)
    _check_xi(s.xi2)
    return EntropyReport(
        purity=_ladder_purity(s.xi1) * _ladder_purity(s.xi2),
        s_renyi={float(a): renyi(s.xi1, float(a)) + renyi(s.xi2, float(a)) for a in alphas},
        s_von=von_neumann(s.xi1) + von_neumann(s.xi2),
    )
