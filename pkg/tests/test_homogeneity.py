import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from germfib import (MapGerm, Polynomial, PolarWeights, RadialWeights, catalog_germ, detect_polar_weights,
                     detect_radial_weights, euler_field, parse_germ_text, parse_mixed,
                     verify_polar_action, verify_radial_action)


@st.composite
def weighted_germs(draw):
    m = draw(st.integers(2, 3))
    q = draw(st.lists(st.integers(1, 3), min_size=m, max_size=m))
    d = draw(st.integers(2, 6))
    # every monomial of weighted degree d
    exps = [e for e in np.ndindex(*([d + 1] * m)) if sum(a * b for a, b in zip(e, q)) == d]
    if not exps:
        return None
    chosen = draw(st.lists(st.sampled_from(exps), min_size=1, max_size=4, unique=True))
    comp = Polynomial(m, {e: draw(st.integers(1, 4)) for e in chosen})
    return MapGerm((comp,), names=tuple(f"x{i}" for i in range(m)))


@given(weighted_germs())
def test_detected_weights_act_correctly(g):
    if g is None:
        return
    w = detect_radial_weights(g)
    assert w is not None
    assert verify_radial_action(g, w, trials=50)
    gamma = euler_field(w)
    for row, comp in zip(g.jacobian, g.components):
        assert row.dot(gamma) == comp.scale(w.d)


def test_known_radial_weights():
    g = parse_germ_text("vars: x y\nG1 = x^3 + y^2\n")
    assert detect_radial_weights(g) == RadialWeights((2, 3), 6)
    assert detect_radial_weights(catalog_germ("product_xy_t")) == RadialWeights((1, 1, 2), 2)


def test_mixed_degrees_have_no_weights():
    g = parse_germ_text("vars: x y\nG1 = x + x^2 + y\n")
    assert detect_radial_weights(g) is None
    with pytest.raises(ValueError):
        detect_radial_weights(g, bound=0)


def test_wrong_weights_fail_verification(xy_z2):
    assert not verify_radial_action(xy_z2, RadialWeights((1, 2, 1), 2))
    assert not verify_radial_action(xy_z2, RadialWeights((1, 1), 2))


def test_polar_weights_of_fgbar_and_tie_break():
    # f * conj(g) with f, g homogeneous of the same degree has polar degree 0
    assert detect_polar_weights(catalog_germ("fgbar_quadric")) is None
    F = parse_mixed("z1*conj(z2) + z2^2*conj(z1)", ["z1", "z2"])
    # the terms force p1 - p2 = k and 2 p2 - p1 = k, so p = (3k, 2k)
    w = detect_polar_weights(F)
    assert w == PolarWeights((3, 2), 1)
    assert verify_polar_action(F, w, trials=200)
    assert not verify_polar_action(F, PolarWeights((1, 1), 1), trials=50)


def test_polar_weights_require_provenance(xy_z2):
    with pytest.raises(ValueError):
        detect_polar_weights(xy_z2)
