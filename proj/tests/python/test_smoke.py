"""Smoke tests for the python bindings."""

import math

import pytest

varlab = pytest.importorskip("varlab")


def test_expr_eval():
    assert varlab.expr_eval("x^2-y^2", [1.0, 2.0]) == pytest.approx(-3.0)
    assert varlab.expr_eval("2^3^2", []) == pytest.approx(512.0)
    with pytest.raises(varlab.VarlabError):
        varlab.expr_eval("1/0", [])


def test_lagrangian_bundle():
    F = varlab.lagrangian("p-laplace", p=4.0)
    assert F.value([1.0, 0.0]) == pytest.approx(1.0)
    assert F.grad([1.0, 0.0]) == pytest.approx([4.0, 0.0])
    hess = F.hess([1.0, 0.0])
    assert hess[0][0] == pytest.approx(12.0)
    assert hess[1][1] == pytest.approx(4.0)

    window = varlab.ellipticity_bounds(varlab.lagrangian("quadratic"))
    assert window["lambda_min"] == pytest.approx(2.0)
    assert window["lambda_max"] == pytest.approx(2.0)


def test_legendre():
    assert varlab.legendre_1d(lambda t: t * t / 2.0, 3.0) == pytest.approx(4.5)
    assert varlab.legendre_1d(lambda t: t ** 4 / 4.0, 1.0) == pytest.approx(
        0.75, abs=1e-8
    )


def test_solve_and_probe():
    F = varlab.lagrangian("quadratic")
    u, rep = varlab.solve(F, "x^2-y^2", res=49)
    assert rep["converged"]

    fit = varlab.holder_fit(u, dyadic=3)
    assert 1.5 <= fit["alpha"] <= 2.5

    audit = varlab.caccioppoli(F, u)
    assert audit["pass"]

    cl = varlab.courant_lebesgue(u, r=0.125)
    assert cl["pass"]


def test_congestion_flat_minimum():
    F = varlab.lagrangian("congestion")
    u, rep = varlab.solve(F, "x", res=49)
    assert rep["converged"]
    assert rep["energy"] <= 1e-8


def test_energy_and_weak_residual():
    quad = varlab.lagrangian("quadratic")
    fx = varlab.field_sample("x", res=49)
    assert varlab.energy(quad, fx) == pytest.approx(4.0)

    u, rep = varlab.solve(quad, "x^2-y^2", res=49)
    psi = varlab.field_sample("max(0, 1-(x^2+y^2)/0.25)^2", res=49)
    assert abs(varlab.weak_residual(quad, u, psi)) <= 1e-8


def test_sequence_lemmas():
    geo = varlab.seq_geometric(2.0, 1.0, 2.0 ** -10)
    assert geo["verdict"] == "converges-to-zero"
    assert geo["threshold_a0"] == pytest.approx(0.5, abs=1e-4)

    quad = varlab.seq_quadratic(0.1, 1.0, 10000)
    assert quad["verdict"] == "bound-satisfied"


def test_chops():
    assert varlab.chop_line([[1.0, 0.0]], [1.0, 0.0], 0.0, 0.5) == "above"
    assert varlab.chop_circle([[0.1, 0.0]], [0.0, 0.0], 0.75, 1.0) == "inside"
    assert varlab.chop_circle([[2.0, 0.0]], [0.0, 0.0], 0.75, 1.0) == "outside"


def test_hedgehog():
    assert varlab.fourd_value([1.0, 0.0, 0.0, 0.0]) == pytest.approx(1.0)
    spec = varlab.fourd_spectrum([1.0, 0.0, 0.0, 0.0])
    assert min(abs(v) for v in spec) <= 1e-5

    sol = varlab.radial_solution(0.5, 2, 2)
    assert sol["mu"] == pytest.approx(15.0)
    assert sol["report"]["pass"]

    nc = varlab.fourd_normal_correspondence(samples=600, seed=1)
    assert nc["pass"]


def test_eta_audit():
    rep = varlab.eta_audit(3.0, rho0=0.25, n=2)
    assert rep["pass"]
    assert rep["measured"]["max_rel_err_radial"] <= 1e-6
