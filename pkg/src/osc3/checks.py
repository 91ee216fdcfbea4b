"""Invariant and oracle suite behind the ``check`` subcommand.

Each check measures a deviation and compares it with a tolerance; the
report lists them all and fails if any exceeds its bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .config import ScenarioConfig
from .entropy import renyi, von_neumann
from .ermakov import solve_ode
from .errors import DomainError
from .gaussian import generic_g, marginalize_generic
from .model import ModeBasis, build_coupling_matrix, x_pm, z_pm
from .oracle import default_grid, grid_check, grid_entropy, ermakov_residual
from .pipeline import Pipeline, Sample, sample_times


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tol

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name:<44s} deviation {self.deviation:.3e}  tol {self.tol:.1e}"


@dataclass
class CheckReport:
    checks: list[Check] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def add(self, name: str, deviation: float, tol: float) -> None:
        """Keep the worst deviation seen under ``name``."""
        for i, c in enumerate(self.checks):
            if c.name == name:
                if not deviation <= c.deviation:
                    self.checks[i] = Check(name, float(deviation), tol)
                return
        self.checks.append(Check(name, float(deviation), tol))

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out += [f"FAIL  error: {e}" for e in self.errors]
        return out


def _rel(a: float, b: float, floor: float = 1e-300) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


# ---------------------------------------------------------------------------
# per-module invariants, each returning (name, deviation, tol) triples


def basis_invariants(basis: ModeBasis) -> list[tuple[str, float, float]]:
    c = basis.couplings
    k = build_coupling_matrix(c)
    u = basis.u
    lam = basis.eigenvalues
    kscale = max(np.abs(k).max(), 1.0)
    out = [
        ("model: U orthogonal", float(np.abs(u @ u.T - np.eye(3)).max()), 1e-12),
        ("model: U^T diag(lam) U = K", float(np.abs(u.T @ np.diag(lam) @ u - k).max() / kscale), 1e-10),
        (
            "model: eigenvalues vs symmetric eigensolver",
            float(np.abs(np.sort(lam) - np.linalg.eigvalsh(k)).max() / kscale),
            1e-10,
        ),
        ("model: lam+ >= lam-", max(0.0, basis.lambda_minus - basis.lambda_plus), 0.0),
    ]
    if not basis.degenerate:
        z = basis.z
        d = c.j13 - c.j23
        out.append(("model: lam+ - lam- = 2z", abs(basis.lambda_plus - basis.lambda_minus - 2 * z) / kscale, 1e-10))
        out.append((
            "model: A+^2 A-^2 = 1/(12 z^2 (J13-J23)^2)",
            _rel(basis.a_plus**2 * basis.a_minus**2, 1.0 / (12.0 * z * z * d * d)),
            1e-10,
        ))
        zp, zm = z_pm(c, z)
        out.append(("model: Z+ Z- = -3 (J13-J23)^2", _rel(zp * zm, -3.0 * d * d), 1e-10))
        xp, xm = x_pm(c, z)
        target = -3.0 * (c.j12 - c.j13) * d
        out.append((
            "model: X+ X- = -3 (J12-J13)(J13-J23)",
            abs(xp * xm - target) / max(abs(target), c.scale**2),
            1e-10,
        ))
    return out


def _coeff_dev(a, b, fields) -> float:
    va = np.concatenate([np.atleast_1d(np.asarray(getattr(a, f), dtype=float)) for f in fields])
    vb = np.concatenate([np.atleast_1d(np.asarray(getattr(b, f), dtype=float)) for f in fields])
    scale = max(np.abs(va).max(), np.abs(vb).max(), 1e-300)
    return float(np.abs(va - vb).max() / scale)


def kernel_invariants(s: Sample) -> list[tuple[str, float, float]]:
    k = s.kernel
    w = k.wprod
    out = []
    g2 = generic_g(k.basis, k.modes)
    out.append(("gaussian: closed-form G vs U^T diag(v) U / 2", float(np.abs(k.g - g2).max() / np.abs(g2).max()), 1e-10))
    re2 = k.basis.u.T @ np.diag([m.omega_prime for m in k.modes]) @ k.basis.u
    out.append(("gaussian: 2 Re G = U^T diag(w') U", float(np.abs(2 * k.g.real - re2).max() / np.abs(re2).max()), 1e-10))
    for label, red in (("C", s.red_c), ("A", s.red_a)):
        out.append((f"gaussian: R - Y = w'1 w'+ w'- / 2 ({label})", _rel(red.r1 - red.y, 0.5 * w), 1e-10))
        out.append((f"gaussian: unit trace ({label})", abs(red.trace() - 1.0), 1e-12))
    bc = s.red_bc
    out.append(("gaussian: BC positivity minor = w'1 w'+ w'- A / 4", _rel(bc.positivity_minor(), w * bc.a / 4.0), 1e-9))
    out.append(("gaussian: unit trace (BC)", abs(bc.trace() - 1.0), 1e-12))
    one = ("omega", "y", "r1", "i1", "norm")
    two = ("a", "alpha", "beta", "gamma11", "gamma22", "norm")
    out.append(("gaussian: closed vs generic, keep 3", _coeff_dev(s.red_c, marginalize_generic(k, (3,)), one), 1e-9))
    out.append(("gaussian: closed vs generic, keep 1", _coeff_dev(s.red_a, marginalize_generic(k, (1,)), one), 1e-9))
    out.append(("gaussian: closed vs generic, keep 2,3", _coeff_dev(bc, marginalize_generic(k, (2, 3)), two), 1e-9))
    return out


def entropy_invariants(s: Sample) -> list[tuple[str, float, float]]:
    xi = s.spec_c.xi
    x1, x2 = s.spec_bc.xi1, s.spec_bc.xi2
    out = [
        ("entropy: (1-xi)/(1+xi) = purity (C)", abs((1 - xi) / (1 + xi) - s.purity_c), 1e-12),
        (
            "entropy: prod (1-xi)/(1+xi) = purity (BC)",
            abs((1 - x1) / (1 + x1) * (1 - x2) / (1 + x2) - s.purity_bc),
            1e-9,
        ),
        ("entropy: S_von BC chain = S_von via A", s.agreement, 1e-9),
    ]
    for label, rep, pur in (("C", s.report_c, s.purity_c), ("BC", s.report_bc, s.purity_bc)):
        if 2.0 in rep.s_renyi:
            out.append((f"entropy: S_2 = -ln purity ({label})", abs(rep.s_renyi[2.0] + math.log(pur)), 1e-12))
    alphas = np.geomspace(0.1, 10.0, 25)
    for label, xis in (("C", (xi,)), ("BC", (x1, x2))):
        vals = [sum(renyi(x, a) for x in xis) for a in alphas]
        rise = max(0.0, max(b - a for a, b in zip(vals[:-1], vals[1:])))
        out.append((f"entropy: S_alpha non-increasing in alpha ({label})", rise, 1e-12))
        lim = max(abs(sum(renyi(x, 1 + h) for x in xis) - sum(von_neumann(x) for x in xis)) for h in (1e-4, -1e-4))
        out.append((f"entropy: S_alpha -> S_von at alpha = 1 +- 1e-4 ({label})", lim, 1e-3))
    return out


def ermakov_invariants(pipe: Pipeline, tmax: float) -> list[tuple[str, float, float]]:
    out = []
    for label, prof, traj in zip(("1", "+", "-"), pipe.profiles, pipe.trajectories):
        lam_scale = max(abs(prof.initial), abs(prof.final) if math.isfinite(prof.final) else 0.0, 1.0)
        if prof.kind in ("quench", "constant"):
            ode = solve_ode(prof, tmax)
            ts = np.linspace(0.0, tmax, 401)
            out.append((f"ermakov: ODE vs closed form, b (mode {label})", float(np.abs(ode.b(ts) - traj.b(ts)).max()), 1e-8))
            out.append((f"ermakov: ODE vs closed form, bdot (mode {label})", float(np.abs(ode.bdot(ts) - traj.bdot(ts)).max()), 1e-6))
            if prof.final > 0:
                r = prof.initial / prof.final
                b2 = traj.b(ts) ** 2
                lo, hi = min(1.0, r), max(1.0, r)
                viol = max(0.0, float((lo - b2).max()), float((b2 - hi).max()))
                out.append((f"ermakov: b^2 within [min(1,wi/wf), max(1,wi/wf)] (mode {label})", viol, 1e-12))
            out.append((f"ermakov: residual, closed form (mode {label})", ermakov_residual(traj, prof), 1e-6 * lam_scale))
        else:
            out.append((f"ermakov: residual, ODE (mode {label})", ermakov_residual(traj, prof), 1e-6 * lam_scale))
    return out


def oracle_invariants(s: Sample) -> list[tuple[str, float, float]]:
    out = []
    ev, pur = grid_check(s.red_c, default_grid(s.red_c))
    out.append(("oracle: grid S_von vs ladder (C, 1D)", abs(grid_entropy(ev) - s.report_c.s_von), 1e-5))
    out.append(("oracle: quadrature purity (C, 1D)", abs(pur - s.purity_c), 1e-5))
    ev, pur = grid_check(s.red_bc, default_grid(s.red_bc))
    out.append(("oracle: grid S_von vs ladders (BC, 2D)", abs(grid_entropy(ev) - s.report_bc.s_von), 1e-4))
    out.append(("oracle: quadrature purity (BC, 2D)", abs(pur - s.purity_bc), 1e-4))
    top = s.spec_bc.probabilities(10)
    out.append(("oracle: top-10 2D spectrum vs ladders", float(np.abs(ev[:10] - top).max()), 1e-4))
    return out


def _guard(report: CheckReport, what: str, fn: Callable[[], Iterable[tuple[str, float, float]]]) -> None:
    try:
        for name, dev, tol in fn():
            report.add(name, dev, tol)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        report.errors.append(f"{what}: {type(exc).__name__}: {exc}")


def run_check(config: ScenarioConfig, max_times: int = 50, oracle_times: int = 5) -> CheckReport:
    """Run the invariant suite (and, if enabled, the grid oracle) on a scenario."""
    report = CheckReport()
    try:
        pipe = Pipeline(config.schedule, config.t_end)
    except (DomainError, ArithmeticError, RuntimeError) as exc:
        report.errors.append(f"pipeline: {exc}")
        return report
    times = sample_times(config.t_start, config.t_end, min(config.samples, max_times))
    _guard(report, "ermakov", lambda: ermakov_invariants(pipe, config.t_end))
    for t in times:
        try:
            s = pipe.sample(t, config.alphas)
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            report.errors.append(f"t = {t:.6g}: {type(exc).__name__}: {exc}")
            continue
        _guard(report, f"model at t = {t:.6g}", lambda: basis_invariants(s.kernel.basis))
        _guard(report, f"gaussian at t = {t:.6g}", lambda: kernel_invariants(s))
        _guard(report, f"entropy at t = {t:.6g}", lambda: entropy_invariants(s))
    if config.oracle:
        for t in sample_times(config.t_start, config.t_end, oracle_times):
            _guard(report, f"oracle at t = {t:.6g}", lambda: oracle_invariants(pipe.sample(t, config.alphas)))
    return report
