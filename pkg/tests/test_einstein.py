import json
from pathlib import Path

import numpy as np
import pytest

import oracles
from degengr.catalog import get_metric
from degengr.dsl import MetricSpec
from degengr.einstein import (
    HODGE_NORMALIZATION,
    LEVI_CIVITA_NORMALIZATION,
    densitized_residual,
    einstein_at,
    einstein_density_at,
    hodge_double_dual_at,
    kerr_newman_regularize,
    levi_civita_symbol,
    ricci_at,
    scalar_at,
)
from degengr.errors import DegenerateMetricError, DimensionError, NonLorentzianError
from degengr.tensor import eval_metric

NORMALIZATION = json.loads((Path(__file__).parent / "fixtures" / "normalization.json").read_text())
SCH = {"m": 1.0}
RN = {"m": 1.0, "e": 0.5}


def rn_points(n, seed):
    rng = np.random.default_rng(seed)
    return [np.array([rng.uniform(-3, 3), rng.uniform(2.5, 9), rng.uniform(0.3, 2.8), rng.uniform(0, 6)])
            for _ in range(n)]


def test_normalization_constants_are_pinned():
    assert LEVI_CIVITA_NORMALIZATION == NORMALIZATION["levi_civita_density"]
    assert HODGE_NORMALIZATION == NORMALIZATION["hodge_double_dual"]


def test_levi_civita_symbol_exhaustive():
    eps = levi_civita_symbol(4)
    assert eps.shape == (4, 4, 4, 4)
    assert eps[0, 1, 2, 3] == 1.0
    assert set(np.unique(eps)) == {-1.0, 0.0, 1.0}
    assert np.count_nonzero(eps) == 24
    for i, j in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
        assert np.array_equal(eps, -np.swapaxes(eps, i, j))


def test_flat_is_zero_everywhere():
    mink = get_metric("minkowski")
    p = [0.3, -1, 2, 0.5]
    assert not np.any(ricci_at(mink, p).matrix)
    assert scalar_at(mink, p) == 0.0
    assert not np.any(einstein_at(mink, p))
    d = einstein_density_at(mink, p)
    assert not np.any(d.upper) and not np.any(d.lower)
    h = hodge_double_dual_at(mink, p)
    assert not np.any(h.einstein_candidate) and np.isnan(h.ratio)


def test_unit_sphere():
    sphere = get_metric("sphere2")
    for p in ([0.7, 1.0], [2.1, 4.0]):
        ric = ricci_at(sphere, p)
        assert np.allclose(ric.matrix, eval_metric(sphere, p), atol=1e-12)
        assert ric.convention == "classical"
        assert scalar_at(sphere, p) == pytest.approx(2.0)


@pytest.mark.parametrize("r", [3.0, 4.0, 10.0])
def test_schwarzschild_vacuum(r):
    spec = get_metric("schwarzschild", SCH)
    p = [0.4, r, 1.2, 0.3]
    assert np.abs(ricci_at(spec, p).matrix).max() <= 1e-8
    assert abs(scalar_at(spec, p)) <= 1e-8
    assert np.abs(einstein_at(spec, p)).max() <= 1e-8
    assert np.abs(einstein_density_at(spec, p).upper).max() <= 1e-7
    assert np.abs(hodge_double_dual_at(spec, p).einstein_candidate).max() <= 1e-8
    assert np.abs(densitized_residual(spec, p)).max() <= 1e-7


def test_reissner_nordstrom_traceless():
    spec = get_metric("reissner_nordstrom", RN)
    for p in [np.array([0, 3.0, 1.0, 0])] + rn_points(10, 2):
        G = einstein_at(spec, p)
        ginv = np.linalg.inv(eval_metric(spec, p))
        assert abs(np.einsum("ab,ab->", ginv, G)) <= 1e-8
        assert np.allclose(G, oracles.classical_einstein("reissner_nordstrom", p, RN), rtol=1e-7, atol=1e-10)


def test_density_is_a_constant_multiple_of_the_classical_tensor():
    ratios = []
    rng = np.random.default_rng(9)
    cases = [("reissner_nordstrom", RN, p) for p in rn_points(10, 3)] + [
        ("diag_semiregular", {}, np.array([rng.choice([-1, 1]) * rng.uniform(0.3, 2), *rng.uniform(-2, 2, 3)]))
        for _ in range(10)
    ]
    for name, params, p in cases:
        spec = get_metric(name, params)
        g = eval_metric(spec, p)
        ginv = np.linalg.inv(g)
        ref = ginv @ oracles.classical_einstein(name, p, params) @ ginv * np.linalg.det(g)
        raw = einstein_density_at(spec, p).raw
        mask = np.abs(ref) > 1e-8 * np.abs(ref).max()
        ratios.extend(raw[mask] / ref[mask])
        assert np.allclose(raw[~mask], 0, atol=1e-8 * np.abs(raw).max())
    ratios = np.array(ratios)
    assert np.allclose(ratios, NORMALIZATION["levi_civita_density"], rtol=NORMALIZATION["rel_tol"])


def test_hodge_ratio_is_constant():
    spec = get_metric("reissner_nordstrom", RN)
    for p in rn_points(20, 4):
        h = hodge_double_dual_at(spec, p)
        assert h.ratio == pytest.approx(NORMALIZATION["hodge_double_dual"], rel=1e-6)
        assert h.ratio_spread <= 1e-6


def test_density_finite_at_degenerate_point():
    spec = get_metric("diag_semiregular")
    d = einstein_density_at(spec, [0.0, 0.1, 0.2, 0.3])
    assert np.all(np.isfinite(d.upper)) and np.all(np.isfinite(d.lower))
    # R vanishes at t = 0, so does the density
    assert not np.any(d.upper)
    with pytest.raises(DegenerateMetricError):
        einstein_at(spec, [0.0, 0.1, 0.2, 0.3])
    assert ricci_at(spec, [0.0, 0.1, 0.2, 0.3]).convention == "extended convention"


def test_density_matches_classical_near_degenerate_point():
    spec = get_metric("diag_semiregular")
    for t in (0.5, 0.1, 0.02):
        p = [t, 0.1, 0.2, 0.3]
        g = eval_metric(spec, p)
        ginv = np.linalg.inv(g)
        ref = ginv @ oracles.classical_einstein("diag_semiregular", p, {}) @ ginv * np.linalg.det(g)
        assert np.allclose(einstein_density_at(spec, p).upper, ref, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("name, params", [("schwarzschild", SCH), ("reissner_nordstrom", RN),
                                          ("kerr_newman", {"m": 1, "a": 0.5, "e": 0.5})])
def test_symmetry(name, params):
    spec = get_metric(name, params)
    for p in rn_points(4, 5):
        for M in (ricci_at(spec, p).matrix, einstein_at(spec, p),
                  einstein_density_at(spec, p).upper, einstein_density_at(spec, p).lower):
            assert np.abs(M - M.T).max() <= 1e-8 * max(1.0, np.abs(M).max())


def test_densitized_residual_minkowski_lambda():
    mink = get_metric("minkowski")
    eta = np.diag([-1.0, 1, 1, 1])
    assert np.allclose(densitized_residual(mink, [0, 0, 0, 0], lam=1.0), -eta)
    assert not np.any(densitized_residual(mink, [0, 0, 0, 0]))


def test_densitized_residual_is_affine():
    spec = get_metric("reissner_nordstrom", RN)
    p = rn_points(1, 6)[0]
    base = densitized_residual(spec, p)
    g = eval_metric(spec, p)
    det = np.linalg.det(g)
    for lam in (-1.0, 0.5, 2.0):
        assert np.allclose(densitized_residual(spec, p, lam=lam), base + lam * g * det, rtol=1e-12)
    T = np.diag([1.0, 2, 3, 4])
    for kappa in (1.0, 0.3, 8 * np.pi):
        got = densitized_residual(spec, p, T=T, kappa=kappa)
        assert np.allclose(got, base - kappa * T * det, rtol=1e-12)


def test_dimension_and_signature_errors():
    with pytest.raises(DimensionError):
        einstein_density_at(get_metric("sphere2"), [1.0, 0.5])
    with pytest.raises(DimensionError):
        densitized_residual(get_metric("minkowski"), [0, 0, 0, 0], T=np.eye(3))
    riemannian = MetricSpec.build(("a", "b", "c", "d"), np.eye(4).tolist())
    with pytest.raises(NonLorentzianError):
        hodge_double_dual_at(riemannian, [0, 0, 0, 0])
    with pytest.raises(DegenerateMetricError):
        hodge_double_dual_at(get_metric("diag_semiregular"), [0, 0, 0, 0])


def test_kerr_newman_regularize_returns_catalog_spec():
    spec = kerr_newman_regularize(1.0, 0.5, 0.5)
    assert spec == get_metric("kerr_newman_regularized", {"m": 1.0, "a": 0.5, "e": 0.5})
