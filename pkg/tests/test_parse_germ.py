from fractions import Fraction

import numpy as np
import pytest

from germfib import (GermError, MapGerm, ParseError, catalog_germ, catalog_names, jacobian, load_germ,
                     norm_squared, omega_fields, parse_germ_text, parse_mixed, parse_polynomial,
                     singular_set_system)
from germfib.germ import germ_to_text

XYZ = ["x", "y", "z"]


def test_decimals_are_exact():
    assert parse_polynomial("0.25*x", XYZ).coeff((1, 0, 0)) == Fraction(1, 4)
    assert parse_polynomial("x/3", XYZ).coeff((1, 0, 0)) == Fraction(1, 3)


def test_operator_precedence():
    assert parse_polynomial("-x^2", XYZ) == -parse_polynomial("x*x", XYZ)
    assert parse_polynomial("2*x**2 + (y - z)^2", XYZ) == parse_polynomial(
        "2*x*x + y*y - 2*y*z + z*z", XYZ)


@pytest.mark.parametrize("text, pos", [("x +", 3), ("x * w", 4), ("(x + y", 6), ("x / y", 4), ("x ^ 1.5", 4)])
def test_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, XYZ)
    assert info.value.pos == pos
    assert "^" in str(info.value)


def test_mixed_imaginary_unit():
    F = parse_mixed("I*z", ["z"])
    assert F.eval(np.array([2.0 + 0j])) == pytest.approx(2j)
    assert parse_mixed("z*conj(z)", ["z"]).eval(np.array([3 + 4j])) == pytest.approx(25)


def test_germ_file_round_trip(tmp_path):
    for name in catalog_names():
        g = catalog_germ(name)
        text = germ_to_text(g)
        path = tmp_path / f"{name}.gm"
        path.write_text(text)
        h = load_germ(path)
        assert h.components == g.components
        assert dict(h.declared_flags) == dict(g.declared_flags)
        assert h.label == name
        assert germ_to_text(h) == text


def test_germ_file_comments_and_flags():
    g = parse_germ_text("vars: a b c  # three\nG1 = a*b\nG2 = c\nflags: thom_regular\n")
    assert (g.m, g.p) == (3, 2)
    assert g.declared_flags["thom_regular"] == "declared"


@pytest.mark.parametrize("text, fragment", [
    ("G1 = x\n", "vars"),
    ("vars: x y\nG1 = x\nG3 = y\n", "numbered"),
    ("vars: x y\nH = x\n", "unknown definition"),
    ("vars: x y\nG1 = x + q\n", "line 2"),
    ("cvars: z\nf = z\n", "both f"),
    ("vars: x y\nG1 = x + 1\n", "origin"),
])
def test_germ_file_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_germ_text(text)
    assert fragment in str(info.value)


def test_error_column_points_into_the_line():
    with pytest.raises(ParseError) as info:
        parse_germ_text("vars: x y\nG1 = x + * y\n")
    assert info.value.text == "G1 = x + * y"
    assert info.value.text[info.value.pos] == "*"


def test_germ_must_vanish_at_origin():
    with pytest.raises(GermError):
        MapGerm((parse_polynomial("x + 1", ["x", "y"]),), names=("x", "y"))


def test_fgbar_germ_is_the_product_with_conjugate():
    g = catalog_germ("fgbar_quadric")
    assert g.provenance.kind == "fgbar"
    z = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    f, gg = z[0] ** 2 + z[1] ** 2, z[0] ** 2 - z[1] ** 2
    x = np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])
    val = f * np.conj(gg)
    assert np.allclose(g.values(x), [val.real, val.imag])


def test_derived_objects_of_xy_z2(xy_z2):
    names = XYZ
    J = jacobian(xy_z2)
    assert J[0][0] == parse_polynomial("y", names)
    assert J[1][2] == parse_polynomial("2*z", names)
    assert norm_squared(xy_z2) == parse_polynomial("x^2*y^2 + z^4", names)
    (omega,) = omega_fields(xy_z2).omegas
    # Omega_12 = G1 grad G2 - G2 grad G1
    assert list(omega) == [parse_polynomial(s, names) for s in ("-y*z^2", "-x*z^2", "2*x*y*z")]
    sing = singular_set_system(xy_z2)
    assert sing.rank_deficient(np.array([0.3, 0.2, 0.0]))
    assert not sing.rank_deficient(np.array([0.3, 0.2, 0.1]))


def test_values_shapes(xy_z2):
    assert xy_z2.values(np.zeros(3)).shape == (2,)
    assert xy_z2.values(np.zeros((5, 3))).shape == (5, 2)
    assert xy_z2.jacobian_values(np.zeros((5, 3))).shape == (5, 2, 3)
    assert xy_z2.hessian_values(np.zeros((5, 3))).shape == (5, 2, 3, 3)
    assert np.all(np.isnan(xy_z2.psi(np.zeros(3))))
