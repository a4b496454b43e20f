import json
import math
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import oracles
from degengr.errors import ConvergenceError, PathError, PoleError, PresetError
from degengr.scfoliate import (
    PRESETS,
    Polyline,
    PolylineSet,
    StripConfig,
    end_limit,
    foliation,
    integration_path,
    interior_angles,
    polygon_vertices,
    preset,
    render,
    sc_integrand,
    sc_map,
    trivial_config,
    validate_config,
)

FIX = Path(__file__).parent / "fixtures"
REFERENCE = json.loads((FIX / "sc_reference.json").read_text())
GOLDEN = ("hexagon", "diamond", "rn_kerr", "superman")
H, Q = Fraction(1, 2), Fraction(3, 4)

# mirror phase exp(i pi [sum_lower(alpha - 1) - sum_upper(alpha - 1)]) is 1 here
ASYMMETRIC = StripConfig((-1.0, 0.3), (0.7, -0.5), (H, Q, Q, H), Q, Q, name="asymmetric")


def cfg_args(cfg):
    return (list(cfg.lower), list(cfg.upper), [float(a) for a in cfg.angles],
            float(cfg.alpha_minus), float(cfg.alpha_plus))


def interior_points(n, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-3, 3, n) + 1j * rng.uniform(0.05, 0.95, n)


# --------------------------------------------------------------- presets

def test_preset_angles():
    assert [a for _, a in preset("diamond").listing()] == [H] * 4
    assert [a for _, a in preset("threeoo3s", a=2, b=1).listing()] == [H, H, Fraction(3, 2), H, H, Q, Q]
    assert [a for _, a in preset("hexagon").listing()] == [H, Q, Q, H, Q, Q]
    assert [a for _, a in preset("rn_kerr").listing()] == [H, H, Fraction(3, 2), H, H, H]
    assert [a for _, a in preset("superman").listing()] == [H, H, H, Q, Q]


def test_preset_prevertices():
    assert [lbl for lbl, _ in preset("hexagon", a=2).listing()] == ["-inf", "-2", "2", "+inf", "2+i", "-2+i"]
    assert [lbl for lbl, _ in preset("superman").listing()] == ["-inf", "0", "+inf", "1+i", "-1+i"]
    assert preset("diamond").prevertices == (0j, 1j)


@pytest.mark.parametrize("name", PRESETS)
def test_presets_are_valid_with_exact_angle_sum(name):
    cfg = preset(name)
    assert validate_config(cfg) == []
    total = sum((a for _, a in cfg.listing()), Fraction(0))
    assert isinstance(total, Fraction) and total == cfg.n_total - 2


@pytest.mark.parametrize("kwargs", [dict(name="threeoo3s", a=1, b=2), dict(name="threeoo3s", a=1, b=1),
                                    dict(name="hexagon", a=0), dict(name="hexagon", a=-1),
                                    dict(name="kerr")])
def test_preset_errors(kwargs):
    with pytest.raises(PresetError):
        preset(**kwargs)


@pytest.mark.parametrize(
    "cfg, fragment",
    [
        (StripConfig((0.0, 0.0), (), (H, H), H, H), "coincident prevertices"),
        (StripConfig((1.0, 0.0), (), (Fraction(1), Fraction(1)), H, H), "increasing"),
        (StripConfig((), (0.0, 1.0), (Fraction(1), Fraction(1)), H, H), "decreasing"),
        (StripConfig((0.0, 0.0015), (), (Fraction(1), Fraction(1)), 0, 0), "closer than"),
        (StripConfig((0.0,), (), (H,), H, H), "angle sum"),
        (StripConfig((0.0,), (), (H, H), H, H), "angles for"),
        (StripConfig((0.0,), (), (Fraction(-1),), 1, 1), "positive"),
        (StripConfig((), (), (), 0, 0, z0=1.5j), "interior"),
        (StripConfig((), (), (), 0, 0, C=0), "zero"),
    ],
)
def test_validation_findings(cfg, fragment):
    assert any(fragment in f for f in validate_config(cfg)), validate_config(cfg)


def test_mirror_of_a_preset_is_itself():
    for name in ("hexagon", "diamond", "rn_kerr", "superman"):
        cfg = preset(name)
        m = cfg.mirror()
        assert (m.lower, m.upper, m.angles) == (cfg.lower, cfg.upper, cfg.angles)
    assert validate_config(ASYMMETRIC) == [] and validate_config(ASYMMETRIC.mirror()) == []


# -------------------------------------------------------------- integrand

def test_trivial_integrand_is_one():
    cfg = trivial_config()
    for z in (0.5j, 3 + 0.2j, -7 + 1j, 2.0):
        assert sc_integrand(z, cfg) == 1


def test_integrand_at_base_point_matches_oracle():
    for name in PRESETS:
        ref = complex(*REFERENCE[name]["integrand_at_z0"])
        got = sc_integrand(0.5j, preset(name))
        assert got != 0 and abs(got - ref) <= 1e-12 * abs(ref)


def test_integrand_poles_and_zeros():
    with pytest.raises(PoleError):
        sc_integrand(1.0, preset("hexagon"))
    assert sc_integrand(0.0, preset("rn_kerr")) == 0
    with pytest.raises(PathError):
        sc_integrand(0.3 + 1.5j, preset("hexagon"))


# -------------------------------------------------------------------- map

def test_trivial_map_is_identity():
    cfg = trivial_config()
    for z in list(interior_points(20, 1)) + [4.0, -2 + 1j]:
        assert abs(sc_map(z, cfg) - z) <= 1e-10


def test_base_point_maps_to_A():
    cfg = StripConfig((-1.0, 1.0), (1.0, -1.0), (Q,) * 4, H, H, A=0.25 - 2j, C=1.5 + 0.5j)
    assert sc_map(cfg.z0, cfg) == cfg.A
    assert sc_map(0.5j, preset("hexagon")) == 0


@pytest.mark.parametrize("name", PRESETS)
def test_map_matches_reference(name):
    cfg, ref = preset(name), REFERENCE[name]
    for p, (label, _) in zip(cfg.prevertices, [x for x in cfg.listing() if "inf" not in x[0]]):
        assert abs(sc_map(p, cfg) - complex(*ref["vertices"][label])) <= 1e-9
    for x, y, re, im in ref["interior"]:
        assert abs(sc_map(complex(x, y), cfg) - complex(re, im)) <= 1e-9
    for sign, key in ((-1, "end_minus"), (1, "end_plus")):
        val, ok = end_limit(cfg, sign)
        assert ok and abs(val - complex(*ref[key])) <= 1e-7


def test_live_oracle_recheck():
    cfg = preset("superman")
    z = -0.8 + 0.35j
    assert abs(sc_map(z, cfg) - oracles.mp_strip_map(z, *cfg_args(cfg), dps=20)) <= 1e-9


@pytest.mark.parametrize("name", PRESETS)
def test_conformality(name):
    cfg = preset(name)
    eps = 1e-5
    for z in interior_points(50, 2):
        f0 = sc_map(z, cfg)
        dx = (sc_map(z + eps, cfg) - f0) / eps
        dy = (sc_map(z + 1j * eps, cfg) - f0) / (1j * eps)
        assert abs(dx - dy) <= 1e-3 * abs(dx)


@pytest.mark.parametrize("name", PRESETS)
def test_path_independence(name):
    cfg = preset(name)
    pts = list(cfg.prevertices) + list(interior_points(10, 3)) + [0.37, 1.6 + 1j]
    for z in pts:
        assert integration_path(z, cfg, 0.5) != integration_path(z, cfg, 0.2)
        assert abs(sc_map(z, cfg, via=0.5) - sc_map(z, cfg, via=0.2)) <= 1e-8
        assert abs(sc_map(z, cfg, via=0.5) - sc_map(z, cfg, via=0.85)) <= 1e-8


def test_paths_stay_inside_and_avoid_foreign_prevertices():
    cfg = preset("threeoo3s")
    for z in list(cfg.prevertices) + list(interior_points(20, 4)) + [0.001, 0.5 + 1j]:
        path = integration_path(z, cfg)
        assert path[0] == cfg.z0 and path[-1] == z
        for v, w in zip(path, path[1:]):
            assert 0 < 0.5 * (v + w).imag < 1 or v.imag == w.imag in (0.0, 1.0)


# -------------------------------------------------------------- polygons

def _edges(cfg):
    """Boundary edges as ``(x_from, x_to, height)`` in vertex order; ``None``
    stands for the strip end on that side."""
    lower = [None] + list(cfg.lower) + [None]
    upper = [None] + list(cfg.upper) + [None]
    return [(a, b, 0.0) for a, b in zip(lower, lower[1:])] + [(a, b, 1.0) for a, b in zip(upper, upper[1:])]


def _straightness(cfg, vertices):
    """Worst distance of boundary samples from the segment joining
    consecutive vertex images, relative to the segment length."""
    worst = 0.0
    n = len(vertices)
    for i, (xa, xb, height) in enumerate(_edges(cfg)):
        v, w = vertices[i], vertices[(i + 1) % n]
        # upper edges run right to left; the ends are approached 8 units out
        direction = 1.0 if height == 0.0 else -1.0
        xa = xb - 8.0 * direction if xa is None else xa
        xb = xa + 8.0 * direction if xb is None else xb
        xs = np.linspace(xa, xb, 22)[1:-1]
        imgs = np.array([sc_map(complex(x, height), cfg) for x in xs])
        seg = w.image - v.image
        dist = np.abs(((imgs - v.image) / seg).imag) * abs(seg)
        worst = max(worst, float(dist.max() / abs(seg)))
    return worst


@pytest.mark.parametrize("name", PRESETS)
def test_boundary_is_straight_between_vertices(name):
    cfg = preset(name)
    verts = polygon_vertices(cfg)
    assert all(v.converged for v in verts)
    assert _straightness(cfg, verts) <= 1e-6


@pytest.mark.parametrize("name", PRESETS)
def test_interior_angles(name):
    verts = polygon_vertices(preset(name))
    for v, ang in zip(verts, interior_angles(verts)):
        assert abs(ang - float(v.alpha)) * 180 <= 1.0, (v.label, ang, v.alpha)


def test_diamond_is_a_right_angled_quadrilateral():
    verts = polygon_vertices(preset("diamond"))
    assert len(verts) == 4
    assert np.allclose(interior_angles(verts), 0.5, atol=1e-6)


def test_hexagon_has_six_vertices():
    assert len(polygon_vertices(preset("hexagon"))) == 6


def test_trivial_ends_do_not_converge():
    verts = polygon_vertices(trivial_config())
    assert [v.converged for v in verts] == [False, False]
    assert interior_angles(verts) == [None, None]


# -------------------------------------------------------------- foliation

def test_trivial_foliation_is_horizontal_lines():
    ps = foliation(trivial_config(), 3, x_range=(-2, 2), samples=16)
    assert [leaf.level for leaf in ps.leaves] == [0.25, 0.5, 0.75]
    for leaf in ps.leaves:
        assert np.allclose(leaf.points.imag, leaf.level, atol=1e-10)
        assert np.allclose(leaf.points.real, np.linspace(-2, 2, 16), atol=1e-10)
    assert not ps.of_kind("vertex")


@pytest.mark.parametrize("name", PRESETS)
def test_leaves_are_ordered_and_disjoint(name):
    ps = foliation(preset(name), 20)
    leaves = ps.leaves
    assert [leaf.level for leaf in leaves] == sorted(leaf.level for leaf in leaves)
    for a, b in zip(leaves, leaves[1:]):
        assert np.abs(a.points - b.points).min() > 0
    # the middle of each leaf moves monotonically from past to future
    mid = [leaf.points[len(leaf.points) // 2].imag for leaf in leaves]
    assert np.all(np.diff(mid) > 0)
    assert np.all(np.isfinite(ps.all_points()))


def test_foliation_labels_and_pieces():
    cfg = preset("hexagon")
    ps = foliation(cfg, 4, samples=64)
    labels = [p.label for p in ps.polylines]
    assert labels[:4] == ["leaf c=0.2", "leaf c=0.4", "leaf c=0.6", "leaf c=0.8"]
    assert [p.label for p in ps.of_kind("boundary")] == [f"lower {i}" for i in range(3)] + [
        f"upper {i}" for i in range(3)]
    assert len(ps.of_kind("vertex")) == 6


@pytest.mark.parametrize("kwargs", [dict(leaves=1), dict(leaves=3, samples=8), dict(leaves=3, x_range=(1, 1))])
def test_foliation_argument_errors(kwargs):
    with pytest.raises(ValueError):
        foliation(trivial_config(), **kwargs)


@pytest.mark.parametrize("cfg", [preset("hexagon"), preset("superman", a=0.7), ASYMMETRIC],
                         ids=["hexagon", "superman", "asymmetric"])
def test_mirror_equivariance(cfg):
    a = foliation(cfg, 6, samples=41)
    b = foliation(cfg.mirror(), 6, samples=41)
    shift = None
    for la, lb in zip(a.leaves, b.leaves):
        assert la.level == lb.level
        reflected = -np.conj(la.points[::-1])
        if shift is None:
            shift = (lb.points - reflected).mean().real
        assert np.abs(lb.points - reflected - shift).max() <= 1e-7


def test_convergence_error_surfaces():
    with pytest.raises(ConvergenceError):
        sc_map(2.0 + 0.5j, preset("hexagon"), tol=1e-300)


# ------------------------------------------------------------------ render

def test_empty_svg_is_valid():
    root = ET.fromstring(render(PolylineSet(), "svg"))
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    assert not root.findall(".//{http://www.w3.org/2000/svg}path")


def test_single_leaf_gives_one_path():
    ps = PolylineSet([Polyline("leaf", "leaf c=0.5", np.array([0 + 0j, 1 + 2j]), 0.5)])
    root = ET.fromstring(render(ps, "svg"))
    paths = root.findall(".//{http://www.w3.org/2000/svg}path")
    assert len(paths) == 1 and paths[0].get("class") == "leaf"
    assert paths[0].get("d") == "M 0.00000 0.00000 L 1.00000 -2.00000"
    x, y, w, h = map(float, root.get("viewBox").split())
    assert (x, y, w, h) == pytest.approx((-0.1, -2.1, 1.2, 2.2))


def test_leaves_and_boundary_are_styled_differently():
    root = ET.fromstring(render(foliation(preset("diamond"), 3, samples=32), "svg"))
    styles = {p.get("class"): p.get("stroke") for p in root.iter("{http://www.w3.org/2000/svg}path")}
    assert set(styles) == {"leaf", "boundary", "vertex"}
    assert len(set(styles.values())) == 3


def test_csv():
    ps = PolylineSet([Polyline("leaf", "leaf c=0.5", np.array([1 / 3 + 2j, -0.25 - 1e-20j]), 0.5)])
    text = render(ps, "csv").decode()
    assert text.splitlines() == ["label,index,re,im", "leaf c=0.5,0,0.333333333333,2", "leaf c=0.5,1,-0.25,-1e-20"]
    with pytest.raises(ValueError):
        render(ps, "png")


@pytest.mark.parametrize("name", GOLDEN)
def test_golden_svg(name):
    assert render(foliation(preset(name), 20), "svg") == (FIX / f"{name}.svg").read_bytes()


def test_render_is_byte_stable():
    ps = foliation(preset("superman"), 5, samples=32)
    assert render(ps, "svg") == render(ps, "svg")
    assert render(ps, "csv") == render(foliation(preset("superman"), 5, samples=32), "csv")


def test_no_nan_text_in_svg():
    text = render(foliation(preset("rn_kerr"), 5, samples=32), "svg").decode()
    assert "nan" not in text and "inf" not in text
    assert math.isfinite(float(ET.fromstring(text).get("height")))
