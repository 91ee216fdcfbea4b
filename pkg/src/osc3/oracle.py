"""Brute-force checks that share no algebra with the closed forms.

Reduced kernels are sampled on uniform grids and their integral operators
discretized (Nystrom, trapezoid weights, symmetric scaling so the matrix
stays Hermitian).  Spectra, purities and entropies of those matrices are
compared against the analytic ladders.  The Ermakov residual is checked
by central differences on any dense trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh

from .errors import GridError
from .gaussian import ReducedKernel1, ReducedKernel2

TRACE_TOL = 1e-3
CLIP_NEG = 1e-8
FULL_SOLVE_MAX = 400
TOP_EIGS = 64
DEFAULT_SPAN = 7.0
RESOLUTION = 1.25
MAX_POINTS_2D = 64


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid ``[-L, L]^d`` with ``n`` points per axis.

    ``frame`` is an optional real invertible ``d x d`` matrix ``T``: nodes
    ``u`` of the grid map to positions ``x = T u`` and the kernel becomes
    ``|det T| rho(T u, T u')``, a similarity transform with the same
    spectrum.  ``None`` means plain position coordinates.
    """

    halfwidth: float
    points: int
    frame: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.points < 16:
            raise GridError(f"need at least 16 points per axis, got {self.points}")
        if not self.halfwidth > 0:
            raise GridError(f"halfwidth must be positive, got {self.halfwidth}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.halfwidth, self.halfwidth, self.points)

    @property
    def step(self) -> float:
        return 2.0 * self.halfwidth / (self.points - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def scaled(self, factor: float) -> "GridSpec":
        """Same spacing, half-width multiplied by ``factor``."""
        n = int(round((self.points - 1) * factor)) + 1
        return GridSpec(self.step * (n - 1) / 2.0, n, self.frame)


def _exponent(k) -> tuple[np.ndarray, np.ndarray]:
    """``(P, Q)`` with ``rho ~ exp(-x.P.x - x'.P*.x' + 2 x.Q.x')``."""
    if isinstance(k, ReducedKernel1):
        p = complex(k.r1, -k.i1) / k.omega
        q = k.y / k.omega
        return np.array([[p]]), np.array([[q]])
    return k.exponent_matrices()


def _real_form(k, frame=None) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of the exponent form over ``(x, x')``.

    The kernel is ``norm * exp(-v^T (H_re + i H_im) v)`` with ``v = (x, x')``.
    """
    p, q = _exponent(k)
    if frame is not None:
        p, q = frame.T @ p @ frame, frame.T @ q @ frame
    h = np.block([[p, -q], [-q.T, p.conj()]])
    return h.real, h.imag


def gaussian_widths(k, frame=None) -> tuple[float, float]:
    """``(eps_min, eps_max)`` with the kernel decaying like ``exp(-eps v^2 / 2)``.

    ``eps_max`` also counts the phase curvature, which the grid has to
    resolve just like the envelope.
    """
    h_re, h_im = _real_form(k, frame)
    ev = np.linalg.eigvalsh(h_re)
    if ev[0] <= 0:
        raise GridError("kernel envelope is not decaying in every direction")
    return 2.0 * ev[0], 2.0 * (ev[-1] + np.linalg.norm(h_im, 2))


def whitening_frame(k) -> np.ndarray:
    """``(Re P)^(-1/2)``: makes the envelope in each argument isotropic."""
    p, _ = _exponent(k)
    w, v = np.linalg.eigh(p.real)
    if w[0] <= 0:
        raise GridError("kernel envelope is not decaying in every direction")
    return (v / np.sqrt(w)) @ v.T


def diagonal_precision(k, frame=None) -> float:
    """Smallest precision ``eps_min`` of the diagonal density ``rho(x, x)``.

    ``rho(x, x) ~ exp(-2 x.(Re P - Re Q).x)``; its widest direction has
    standard deviation ``1/sqrt(eps_min)``, and the eigenfunctions of the
    operator spread about as far.
    """
    p, q = _exponent(k)
    if frame is not None:
        p, q = frame.T @ p @ frame, frame.T @ q @ frame
    ev = np.linalg.eigvalsh(4.0 * (p.real - q.real))
    if ev[0] <= 0:
        raise GridError("diagonal density is not normalizable")
    return float(ev[0])


def default_grid(k, points: int | None = None, span: float = DEFAULT_SPAN) -> GridSpec:
    """Whitened grid of half-width ``span / sqrt(eps_min)``.

    ``eps_min`` is the smallest precision of the diagonal density in the
    whitened frame.  Unless given, the number of points is chosen so that
    ``step * sqrt(eps_max) <= RESOLUTION``, with at least 200 points in 1D
    and between 32 and 64 per axis in 2D.
    """
    frame = whitening_frame(k)
    half = span / math.sqrt(diagonal_precision(k, frame))
    if points is None:
        _, eps_max = gaussian_widths(k, frame)
        need = math.ceil(2.0 * half * math.sqrt(eps_max) / RESOLUTION) + 1
        if isinstance(k, ReducedKernel1):
            points = max(200, need)
        else:
            points = min(max(32, need), MAX_POINTS_2D)
    return GridSpec(half, points, frame)


def nystrom_matrix(k, g: GridSpec) -> np.ndarray:
    """Hermitian matrix ``sqrt(w_i) rho(x_i, x_j) sqrt(w_j)``."""
    x = g.nodes
    sw = np.sqrt(g.weights)
    jac = 1.0 if g.frame is None else abs(float(np.linalg.det(g.frame)))
    if isinstance(k, ReducedKernel1):
        xs = x if g.frame is None else g.frame[0, 0] * x
        m = k.density(xs[:, None], xs[None, :])
        m = jac * (sw[:, None] * m * sw[None, :])
    else:
        u1, u2 = np.meshgrid(x, x, indexing="ij")
        u = np.stack([u1.ravel(), u2.ravel()])
        if g.frame is not None:
            u = g.frame @ u
        s = np.outer(sw, sw).ravel()
        m = k.density(u[0][:, None], u[1][:, None], u[0][None, :], u[1][None, :])
        m = jac * (s[:, None] * m * s[None, :])
    return m


def _spectrum(k, g: GridSpec) -> np.ndarray:
    return _spectrum_of(nystrom_matrix(k, g))


def _spectrum_of(m: np.ndarray) -> np.ndarray:
    asym = np.abs(m - m.conj().T).max()
    if asym > 1e-10 * max(np.abs(m).max(), 1e-300):
        raise GridError(f"discretized kernel is not Hermitian (residue {asym:.3g})")
    total = float(np.trace(m).real)
    if abs(total - 1.0) > TRACE_TOL:
        raise GridError(f"grid trace {total:.6g} deviates from 1: grid too coarse or too narrow")
    m = 0.5 * (m + m.conj().T)
    size = m.shape[0]
    if size <= FULL_SOLVE_MAX:
        ev = eigvalsh(m, overwrite_a=True, check_finite=False)[::-1]
    else:
        # only the top of the spectrum carries weight; widen the window
        # until the discarded tail is below the clipping level
        top = TOP_EIGS
        while True:
            top = min(top, size)
            ev = eigvalsh(m, subset_by_index=[size - top, size - 1], driver="evr",
                          check_finite=False)[::-1]
            if top == size or total - ev.sum() < CLIP_NEG:
                break
            top *= 2
    ev[(ev < 0) & (ev > -CLIP_NEG)] = 0.0
    return ev


def spectrum_grid_1d(k: ReducedKernel1, g: GridSpec | None = None) -> np.ndarray:
    """Eigenvalues of the discretized one-mode kernel, descending."""
    return _spectrum(k, g or default_grid(k))


def spectrum_grid_2d(k: ReducedKernel2, g: GridSpec | None = None) -> np.ndarray:
    """Eigenvalues of the discretized two-mode kernel (``n^2 x n^2``), descending."""
    g = g or default_grid(k)
    if g.points > MAX_POINTS_2D:
        raise GridError(f"{g.points}^2 nodes exceeds the {MAX_POINTS_2D**2} cap for dense 2D eigensolves")
    return _spectrum(k, g)


def purity_quadrature(k, g: GridSpec | None = None) -> float:
    """Trapezoid value of ``int rho(x, x') rho(x', x)``."""
    g = g or default_grid(k)
    m = nystrom_matrix(k, g)
    return float(np.sum(np.abs(m) ** 2))


def grid_check(k, g: GridSpec | None = None) -> tuple[np.ndarray, float]:
    """Spectrum and quadrature purity from a single matrix assembly."""
    g = g or default_grid(k)
    if isinstance(k, ReducedKernel2) and g.points > MAX_POINTS_2D:
        raise GridError(f"{g.points}^2 nodes exceeds the {MAX_POINTS_2D**2} cap for dense 2D eigensolves")
    m = nystrom_matrix(k, g)
    pur = float(np.sum(np.abs(m) ** 2))
    return _spectrum_of(m), pur


def grid_entropy(p: np.ndarray) -> float:
    """``-sum p ln p`` over the positive part of a spectrum."""
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def ermakov_residual(trajectory, profile, times=None, delta: float = 1e-5) -> float:
    """Max ``|b'' + lam(t) b - lam(0) / b^3|`` over interior sample times.

    ``b''`` is the central difference of the trajectory's ``bdot``.
    """
    tmax = trajectory.tmax
    if times is None:
        times = np.linspace(10 * delta, tmax - 10 * delta, 1001)
    times = np.asarray(times, dtype=float)
    b = trajectory.b(times)
    bddot = (trajectory.bdot(times + delta) - trajectory.bdot(times - delta)) / (2.0 * delta)
    lam = np.array([profile.driving(t) for t in times])
    return float(np.max(np.abs(bddot + lam * b - profile.initial / b**3)))
