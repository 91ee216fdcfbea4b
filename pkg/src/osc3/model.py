"""Coupling schedules and the normal-mode decomposition of the coupling matrix.

The three oscillators share an on-site term ``K0`` and pairwise springs
``J12, J13, J23``.  The potential matrix

    K = [[K0 + J12 + J13, -J12,           -J13          ],
         [-J12,           K0 + J12 + J23, -J23          ],
         [-J13,           -J23,           K0 + J13 + J23]]

always has the uniform vector (1, 1, 1)/sqrt(3) as an eigenvector with
eigenvalue ``K0``.  The other two eigenpairs have a closed form which breaks
down when all couplings are equal (``z = 0``) or when ``J13 == J23``; those
configurations are routed to a numeric eigensolve on the plane orthogonal
to the uniform vector.

Eigenvalues (not frequencies) are stored throughout so that negative
``K0`` stays real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

DEGENERACY_TOL = 1e-9

_PARAMS = ("k0", "j12", "j13", "j23")


@dataclass(frozen=True)
class CouplingsAt:
    """Parameter values at one instant."""

    k0: float
    j12: float
    j13: float
    j23: float
    t: float = 0.0

    def __post_init__(self):
        vals = (self.k0, self.j12, self.j13, self.j23, self.t)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite coupling values: {vals}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.k0, self.j12, self.j13, self.j23)

    @property
    def scale(self) -> float:
        return max(abs(self.k0), abs(self.j12), abs(self.j13), abs(self.j23), 1.0)


@dataclass(frozen=True)
class CouplingSchedule:
    """Time profiles of ``K0, J12, J13, J23``.

    ``kind`` is one of ``"quench"``, ``"constant"`` or ``"tabulated"``.
    Quench schedules take the ``initial`` values at ``t == 0`` exactly and
    the ``final`` values for every ``t > 0``.  Tabulated schedules are
    piecewise linear between strictly increasing ``times`` and held constant
    past the last knot.
    """

    kind: str
    initial: tuple[float, float, float, float]
    final: tuple[float, float, float, float]
    times: tuple[float, ...] = ()
    table: tuple[tuple[float, float, float, float], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in ("quench", "constant", "tabulated"):
            raise DomainError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "tabulated":
            t = np.asarray(self.times, dtype=float)
            if t.size < 2 or np.any(np.diff(t) <= 0):
                raise DomainError("tabulated knots must be strictly increasing (at least two)")
            if t[0] != 0.0:
                raise DomainError("tabulated schedules must start at t = 0")
            if len(self.table) != t.size:
                raise DomainError("one table row per knot is required")

    @classmethod
    def quench(cls, initial: Sequence[float], final: Sequence[float]) -> "CouplingSchedule":
        """Sudden change from ``initial`` to ``final`` (each ``(K0, J12, J13, J23)``)."""
        return cls("quench", _four(initial), _four(final))

    @classmethod
    def constant(cls, k0: float, j12: float, j13: float, j23: float) -> "CouplingSchedule":
        vals = _four((k0, j12, j13, j23))
        return cls("constant", vals, vals)

    @classmethod
    def tabulated(cls, times: Sequence[float], rows: Sequence[Sequence[float]]) -> "CouplingSchedule":
        """``rows[k]`` holds ``(K0, J12, J13, J23)`` at ``times[k]``."""
        table = tuple(_four(r) for r in rows)
        return cls("tabulated", table[0], table[-1], tuple(float(t) for t in times), table)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Times where the profiles are not smooth (beyond ``t = 0``)."""
        return self.times[1:-1] if self.kind == "tabulated" else ()

    def at(self, t: float) -> CouplingsAt:
        return couplings_at(self, t)


def _four(vals: Sequence[float]) -> tuple[float, float, float, float]:
    vals = tuple(float(v) for v in vals)
    if len(vals) != 4:
        raise DomainError(f"expected (K0, J12, J13, J23), got {vals}")
    return vals  # type: ignore[return-value]


def couplings_at(schedule: CouplingSchedule, t: float) -> CouplingsAt:
    """Evaluate a schedule at time ``t >= 0``."""
    if not t >= 0.0:
        raise DomainError(f"time must be non-negative, got {t}")
    if schedule.kind == "constant":
        vals = schedule.initial
    elif schedule.kind == "quench":
        vals = schedule.initial if t == 0.0 else schedule.final
    else:
        knots = np.asarray(schedule.times)
        table = np.asarray(schedule.table)
        vals = tuple(float(np.interp(t, knots, table[:, k])) for k in range(4))
    return CouplingsAt(*vals, t=float(t))


def build_coupling_matrix(c: CouplingsAt) -> np.ndarray:
    k0, j12, j13, j23 = c.as_tuple()
    return np.array(
        [
            [k0 + j12 + j13, -j12, -j13],
            [-j12, k0 + j12 + j23, -j23],
            [-j13, -j23, k0 + j13 + j23],
        ]
    )


@dataclass(frozen=True)
class ModeBasis:
    """Eigen-decomposition ``K = U^T diag(lambda1, lambda+, lambda-) U``.

    Rows of ``u`` are the eigenvectors ``v1, v+, v-`` so that the normal
    coordinates are ``y = u @ x``.  ``a_plus``/``a_minus`` are the closed-form
    normalizations and are NaN on the numeric (degenerate) path.
    """

    couplings: CouplingsAt
    z: float
    lambda1: float
    lambda_plus: float
    lambda_minus: float
    a_plus: float
    a_minus: float
    u: np.ndarray = field(repr=False)
    degenerate: bool

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda_plus, self.lambda_minus])

    @property
    def frequencies(self) -> np.ndarray:
        """``sqrt(lambda)``, purely imaginary for negative eigenvalues."""
        return np.emath.sqrt(self.eigenvalues)


def coupling_z(c: CouplingsAt) -> float:
    # 0.5 * sum of squared differences; never negative, unlike the expanded form
    d1, d2, d3 = c.j12 - c.j13, c.j12 - c.j23, c.j13 - c.j23
    return math.sqrt(0.5 * (d1 * d1 + d2 * d2 + d3 * d3))


def decompose(c: CouplingsAt, tol: float = DEGENERACY_TOL) -> ModeBasis:
    """Diagonalize the coupling matrix, analytically when it is safe to."""
    z = coupling_z(c)
    scale = c.scale
    d = c.j13 - c.j23
    base = c.k0 + c.j12 + c.j13 + c.j23
    if z > tol * scale and abs(d) > tol * scale:
        return _analytic(c, z, base)
    return _numeric(c, z)


def _analytic(c: CouplingsAt, z: float, base: float) -> ModeBasis:
    j12, j13, j23 = c.j12, c.j13, c.j23
    d = j13 - j23
    s = j13 + j23 - 2.0 * j12
    # 2z + s and 2z - s multiply to 3 d^2; take the larger directly, the
    # other from the product to avoid cancellation
    if s >= 0.0:
        p = 2.0 * z + s
        m = 3.0 * d * d / p
    else:
        m = 2.0 * z - s
        p = 3.0 * d * d / m
    a_plus = math.sqrt(p / (6.0 * z)) / d
    a_minus = math.sqrt(m / (6.0 * z)) / d
    inv3 = 1.0 / math.sqrt(3.0)
    v1 = np.full(3, inv3)
    w_p = np.array([-j12 + j23 - z, j12 - j13 + z, d])
    w_m = np.array([-j12 + j23 + z, j12 - j13 - z, d])
    # the shorter of the two raw vectors loses digits to cancellation; take
    # it as the cross product of the other two rows instead, same sign
    if np.dot(w_p, w_p) >= np.dot(w_m, w_m):
        v_p = a_plus * w_p
        v_m = np.cross(v_p, v1)
        v_m = v_m if np.dot(v_m, w_m) * a_minus >= 0 else -v_m
    else:
        v_m = a_minus * w_m
        v_p = np.cross(v1, v_m)
        v_p = v_p if np.dot(v_p, w_p) * a_plus >= 0 else -v_p
    # A+- normalize exactly in exact arithmetic; renormalizing removes the
    # rounding inherited from z when the spectrum is nearly degenerate
    u = np.vstack([v1, v_p / np.linalg.norm(v_p), v_m / np.linalg.norm(v_m)])
    return ModeBasis(c, z, c.k0, base + z, base - z, a_plus, a_minus, u, False)


# orthonormal basis of the plane orthogonal to (1, 1, 1)
_PLANE = np.array(
    [
        [1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0), 0.0],
        [1.0 / math.sqrt(6.0), 1.0 / math.sqrt(6.0), -2.0 / math.sqrt(6.0)],
    ]
)


def _numeric(c: CouplingsAt, z: float) -> ModeBasis:
    k = build_coupling_matrix(c)
    block = _PLANE @ k @ _PLANE.T
    vals, vecs = np.linalg.eigh(0.5 * (block + block.T))
    order = [1, 0]  # descending: lambda+ first
    rows = (vecs[:, order].T) @ _PLANE
    rows = np.array([_fix_sign(r) for r in rows])
    u = np.vstack([np.full(3, 1.0 / math.sqrt(3.0)), rows])
    return ModeBasis(
        c, z, c.k0, float(vals[1]), float(vals[0]), math.nan, math.nan, u, True
    )


def _fix_sign(v: np.ndarray) -> np.ndarray:
    for comp in v:
        if abs(comp) > 1e-12:
            return v if comp > 0 else -v
    return v


def _split(base: float, half_gap: float, product: float) -> tuple[float, float]:
    """``(base + half_gap, base - half_gap)`` given their exact product.

    The member with no cancellation is formed directly and the other one
    from the product, as in the stable quadratic formula.
    """
    if base >= 0.0:
        big = base + half_gap
        return big, (product / big if big != 0.0 else 0.0)
    big = base - half_gap
    return (product / big if big != 0.0 else 0.0), big


def z_pm(c: CouplingsAt, z: float) -> tuple[float, float]:
    """``Z± = 2 J12 - J13 - J23 ± 2z``; their product is ``-3 (J13 - J23)^2``."""
    d = c.j13 - c.j23
    return _split(2.0 * c.j12 - c.j13 - c.j23, 2.0 * z, -3.0 * d * d)


def y_pm(c: CouplingsAt, z: float) -> tuple[float, float]:
    """``Y± = J12 + J13 - 2 J23 ± z``; their product is ``3 (J12 - J23)(J13 - J23)``."""
    return _split(c.j12 + c.j13 - 2.0 * c.j23, z, 3.0 * (c.j12 - c.j23) * (c.j13 - c.j23))


def x_pm(c: CouplingsAt, z: float) -> tuple[float, float]:
    """``X± = J12 + J23 - 2 J13 ± z``; their product is ``-3 (J12 - J13)(J13 - J23)``."""
    return _split(c.j12 + c.j23 - 2.0 * c.j13, z, -3.0 * (c.j12 - c.j13) * (c.j13 - c.j23))


def w_pm(c: CouplingsAt, z: float) -> tuple[float, float]:
    """``W± = 2 J23 - J12 - J13 ± 2z``; their product is ``-3 (J12 - J13)^2``."""
    d = c.j12 - c.j13
    return _split(2.0 * c.j23 - c.j12 - c.j13, 2.0 * z, -3.0 * d * d)
