import math

import numpy as np
import pytest

from dnrate.materials import (PRESETS, TABULATED_ALPHA, Material, load_materials, material_from,
                              preset, resolve_material, steel_at, steel_cp, steel_cp_branches,
                              steel_lambda)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_alpha_matches_table(name):
    assert preset(name).alpha == pytest.approx(TABULATED_ALPHA[name], rel=1e-3)


def test_diffusivity_is_lambda_over_alpha():
    m = material_from(2.0, 4.0, 5.0)
    assert m.alpha == 20.0
    assert m.d == pytest.approx(0.1)


@pytest.mark.parametrize("bad", [(0, 1, 1), (1, -1, 1), (1, 1, math.nan), (1, 1, math.inf)])
def test_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        Material(*bad)


def test_unknown_preset():
    with pytest.raises(KeyError, match="unknown material"):
        preset("copper")


def test_load_materials(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("# comment\nfoo 1 2 3\n\nbar 0.5 1 1  # trailing\n")
    table = load_materials(f)
    assert set(table) == {"foo", "bar"}
    assert table["foo"].alpha == 6.0
    assert resolve_material("bar", table).lam == 0.5
    assert resolve_material("air", table) == preset("air")


@pytest.mark.parametrize("text", ["foo 1 2\n", "foo 1 x 3\n", "foo 1 -2 3\n"])
def test_load_materials_rejects(tmp_path, text):
    f = tmp_path / "m.txt"
    f.write_text(text)
    with pytest.raises(ValueError, match="m.txt:1"):
        load_materials(f)


def test_steel_lambda_at_quoted_temperatures():
    assert steel_lambda(900.0) == pytest.approx(39.82, abs=5e-3)
    assert steel_lambda(1145.0) == pytest.approx(39.8, abs=5e-3)


def test_steel_cp_at_1145():
    assert steel_cp(1145.0) == pytest.approx(572.75, abs=0.01)


def test_steel_cp_is_soft_minimum():
    for theta in (300.0, 700.0, 900.0, 1145.0, 1400.0):
        c1, c2 = steel_cp_branches(theta)
        lo = min(c1, c2)
        assert lo - 1e-9 <= steel_cp(theta) <= lo + 10.0 * math.log(2.0) + 1e-9


def test_steel_at_builds_material():
    m = steel_at(1145.0)
    assert m.rho == 7836.0
    assert m.cp == pytest.approx(572.75, abs=0.01)


def test_steel_functions_vectorize_and_stay_finite():
    theta = np.arange(273.0, 1500.0, 0.1)
    cp = steel_cp(theta)
    assert cp.shape == theta.shape and np.all(np.isfinite(cp))
    # slopes stay below about 15 per kelvin, so no jumps on a 0.1 K grid
    assert np.abs(np.diff(cp)).max() < 2.0
    assert steel_cp(1145.0) == pytest.approx(float(steel_cp(np.array([1145.0]))[0]))


def test_steel_cp_equal_branches_identity():
    c = 700.0
    assert -10.0 * math.log((2.0 * math.exp(-c / 10.0)) / 2.0) == pytest.approx(c, rel=1e-15)


def test_steel_lambda_constant_term():
    assert steel_lambda(0.0) == 40.1


def test_steel_cp_at_900_against_quoted_value():
    # The quoted 1368.4 is not the smooth minimum at 900 K (about 783), nor
    # the value at 900 - 273.15 (about 603).  It equals the upper branch
    # plus the 10 ln 2 offset of the blend.
    assert steel_cp(900.0) == pytest.approx(783.12, abs=0.01)
    assert steel_cp(900.0 - 273.15) == pytest.approx(602.6, abs=0.1)
    _, upper = steel_cp_branches(900.0)
    assert upper + 10.0 * math.log(2.0) == pytest.approx(1368.4, abs=0.05)
