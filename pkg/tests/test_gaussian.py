import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import figure_pipeline, quench_pipeline, rel
from osc3.ermakov import solve_quench
from osc3.errors import DomainError, NumericalError
from osc3.gaussian import (
    ReducedKernel1,
    build_full_kernel,
    closed_form_g,
    generic_g,
    marginalize_generic,
    reduce_drop_first,
    reduce_keep_first,
    reduce_keep_third,
)
from osc3.model import CouplingsAt, decompose

PIPES = {name: figure_pipeline(name) for name in ("fig1", "fig2", "fig3")}
ONE = ("omega", "y", "r1", "i1", "norm")


def kernel(name, t):
    return PIPES[name].kernel_at(t)


def coeff_rel(a, b, fields):
    va = np.concatenate([np.atleast_1d(np.asarray(getattr(a, f), dtype=float)) for f in fields])
    vb = np.concatenate([np.atleast_1d(np.asarray(getattr(b, f), dtype=float)) for f in fields])
    return np.abs(va - vb).max() / max(np.abs(va).max(), np.abs(vb).max())


TWO = ("a", "alpha", "beta", "gamma11", "gamma22", "norm")


def test_decoupled_vacuum_kernel_is_identity():
    basis = decompose(CouplingsAt(4, 0, 0, 0))
    modes = [solve_quench(4, 4, 0.0)] * 3
    k = build_full_kernel(basis, modes)
    assert np.allclose(k.g, np.eye(3), atol=1e-15)


@pytest.mark.parametrize("name", sorted(PIPES))
def test_kernel_is_real_at_t0(name):
    assert np.all(kernel(name, 0.0).g.imag == 0)


def test_closed_form_g_matches_matrix_route():
    k = kernel("fig1", 0.7)
    g2 = generic_g(k.basis, k.modes)
    assert np.abs(k.g - g2).max() < 1e-10 * np.abs(g2).max()
    assert np.array_equal(k.g, k.g.T)


def test_closed_form_g_needs_regular_basis():
    basis = decompose(CouplingsAt(1, 2, 2, 2))
    with pytest.raises(DomainError):
        closed_form_g(basis, [solve_quench(1, 1, 0)] * 3)


def test_keep_third_examples():
    k0 = quench_pipeline((4, 0, 0, 0), (6, 0, 0, 0)).kernel_at(1.0)
    assert abs(reduce_keep_third(k0).y) < 1e-15
    assert reduce_keep_third(kernel("fig1", 0.0)).i1 == 0.0
    k = kernel("fig2", 1.3)
    assert coeff_rel(reduce_keep_third(k), marginalize_generic(k, (3,)), ONE) < 1e-9


def test_drop_first_examples():
    k0 = quench_pipeline((4, 0, 0, 0), (6, 0, 0, 0)).kernel_at(1.0)
    r = reduce_drop_first(k0)
    assert max(abs(r.alpha[2]), abs(r.alpha[3]), abs(r.beta[2]), abs(r.beta[3])) < 1e-14
    assert reduce_drop_first(kernel("fig1", 0.0)).beta == (0.0, 0.0, 0.0, 0.0)
    k = kernel("fig1", 0.4)
    assert coeff_rel(reduce_drop_first(k), marginalize_generic(k, (2, 3)), TWO) < 1e-9


def test_keep_first_examples():
    k0 = quench_pipeline((4, 0, 0, 0), (6, 0, 0, 0)).kernel_at(1.0)
    assert abs(reduce_keep_first(k0).y) < 1e-15
    k = kernel("fig3", 0.5)
    ra = reduce_keep_first(k)
    assert ra.r1 - ra.y == pytest.approx(0.5 * k.wprod, rel=1e-10)
    assert coeff_rel(ra, marginalize_generic(k, (1,)), ONE) < 1e-9


def test_generic_rejects_bad_keep():
    k = kernel("fig1", 0.3)
    for keep in ((), (1, 2, 3), (0,), (2, 2), (4,)):
        with pytest.raises(DomainError):
            marginalize_generic(k, keep)


def test_generic_flags_ill_conditioned_block():
    k = kernel("fig1", 0.3)
    bad = k.g.copy()
    bad[1:, 1:] = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
    from dataclasses import replace

    with pytest.raises(NumericalError):
        marginalize_generic(replace(k, g=bad), (1,))


def test_degenerate_basis_routes_to_generic():
    k = quench_pipeline((1, 2, 2, 2), (1.5, 3, 3, 3)).kernel_at(0.8)
    assert k.basis.degenerate
    assert reduce_keep_third(k).source == "generic"
    assert reduce_drop_first(k).source == "generic"
    assert reduce_keep_first(k).source == "generic"
    assert reduce_keep_third(k).trace() == pytest.approx(1.0, abs=1e-12)


# -- properties over jittered figure sets --------------------------------------

jitter = st.floats(0.9, 1.1)
times = st.floats(0.0, 5.0)


@st.composite
def kernels(draw):
    name = draw(st.sampled_from(sorted(PIPES)))
    from osc3.config import FIGURES

    ini, fin = FIGURES[name]
    ini = tuple(v * draw(jitter) for v in ini)
    fin = tuple(v * draw(jitter) for v in fin)
    return quench_pipeline(ini, fin, 5.0).kernel_at(draw(times))


@given(kernels())
def test_full_kernel_invariants(k):
    assert np.array_equal(k.g, k.g.T)
    assert np.linalg.eigvalsh(k.g.real)[0] > 0
    re2 = k.basis.u.T @ np.diag([m.omega_prime for m in k.modes]) @ k.basis.u
    assert np.abs(2 * k.g.real - re2).max() < 1e-10 * np.abs(re2).max()
    g2 = generic_g(k.basis, k.modes)
    assert np.abs(k.g - g2).max() < 1e-10 * np.abs(g2).max()


@given(kernels())
def test_one_mode_invariants(k):
    for red, keep in ((reduce_keep_third(k), (3,)), (reduce_keep_first(k), (1,))):
        assert red.r1 - red.y == pytest.approx(0.5 * k.wprod, rel=1e-10)
        assert red.r1 > abs(red.y) >= 0
        assert red.y >= -1e-12 * red.r1
        assert red.trace() == pytest.approx(1.0, abs=1e-12)
        assert coeff_rel(red, marginalize_generic(k, keep), ONE) < 1e-9


@given(kernels())
def test_two_mode_invariants(k):
    r = reduce_drop_first(k)
    a1, a2, a3, a4 = r.alpha
    assert r.positivity_minor() == pytest.approx(k.wprod * r.a / 4, rel=1e-9)
    assert a1 - r.gamma11 > 0 and a2 - r.gamma22 > 0
    assert r.trace() == pytest.approx(1.0, abs=1e-12)
    assert coeff_rel(r, marginalize_generic(k, (2, 3)), TWO) < 1e-9


@given(kernels(), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_reduced_kernels_are_hermitian(k, x1, x2, y1, y2):
    c = reduce_keep_third(k)
    assert c.density(x1, y1) == pytest.approx(np.conj(c.density(y1, x1)), rel=1e-12, abs=1e-300)
    r = reduce_drop_first(k)
    assert r.density(x1, x2, y1, y2) == pytest.approx(np.conj(r.density(y1, y2, x1, x2)), rel=1e-12, abs=1e-300)


def test_trace_by_quadrature():
    # a numerical integral of the diagonal, independent of the trace formula
    from scipy.integrate import quad, dblquad

    k = kernel("fig2", 2.2)
    c = reduce_keep_third(k)
    val, _ = quad(lambda x: c.density(x, x).real, -np.inf, np.inf, epsabs=1e-13)
    assert val == pytest.approx(1.0, abs=1e-10)
    r = reduce_drop_first(k)
    val, _ = dblquad(lambda y, x: r.density(x, y, x, y).real, -12, 12, -12, 12, epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)
