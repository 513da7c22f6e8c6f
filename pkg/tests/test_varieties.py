import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from germfib import (WitnessSet, catalog_germ, cluster_components, milnor_set_system, newton_project,
                     parse_polynomial, singular_set_system, witness_sample)
from germfib.systems import DeterminantalSystem, numerical_rank
from germfib.varieties import NewtonOptions, project_batch, refine_rank_deficient, sphere_seeds

XYZ = ["x", "y", "z"]


def _system(*texts):
    return DeterminantalSystem([parse_polynomial(t, XYZ) for t in texts])


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 0.1))
def test_newton_lands_on_the_unit_sphere(v):
    res = newton_project(_system("x^2 + y^2 + z^2 - 1"), np.array(v))
    assert res.success
    assert abs(np.linalg.norm(res.x) - 1) < 1e-10


def test_minimum_norm_step_is_the_orthogonal_foot():
    # a single linear equation: Gauss-Newton jumps straight to the closest point
    res = newton_project(_system("x + y + z - 1"), np.array([1.0, 2.0, 3.0]))
    assert np.allclose(res.x, np.array([1.0, 2.0, 3.0]) - 5 / 3)


def test_trust_radius_is_enforced():
    res = newton_project(_system("x - 5"), np.zeros(3), NewtonOptions(trust_radius=1.0))
    assert not res.success
    assert res.reason == "left trust region"


def test_sphere_projection_is_scale_free():
    # residual tolerances act on x / r with each equation rescaled, so a
    # degree-7 system converges just as well at r = 1/16 as at r = 1/2
    g = catalog_germ("fgbar_quadric")
    system = milnor_set_system(g)
    counts = []
    for r in (0.5, 0.0625):
        X, res, ok = project_batch(system, r * sphere_seeds(4, 200, 0), sphere_radius=r)
        counts.append(int(ok.sum()))
        assert np.allclose(np.linalg.norm(X[ok], axis=1), r, atol=1e-12)
        assert res[ok].max() < 1e-10
    assert counts[0] > 150 and counts[0] == counts[1]


def test_refinement_repairs_a_non_reduced_singular_set():
    # det dG = (x1^2 + y1^2)^2 vanishes to fourth order on {z1 = 0}
    g = catalog_germ("nonnice_x_xy")
    r = 0.25
    X0 = r * sphere_seeds(4, 50, 1)
    X0[:, :2] *= 1e-3
    X0 = r * X0 / np.linalg.norm(X0, axis=1, keepdims=True)
    X, ok = refine_rank_deficient(g.jacobian_values, g.hessian_values, X0, r)
    assert ok.all()
    assert np.abs(X[:, :2]).max() < 1e-12
    assert np.allclose(np.linalg.norm(X, axis=1), r)


def test_witness_sample_is_deterministic_and_on_the_variety(xy_z2):
    system = singular_set_system(xy_z2)
    a = witness_sample(system, 0.25, 100, 7)
    b = witness_sample(system, 0.25, 100, 7)
    c = witness_sample(system, 0.25, 100, 8)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)
    assert np.allclose(a.radii, 0.25)
    assert a.residuals.max() < 1e-10
    # Sing G = {z = 0} u {x = y = 0}
    on_plane = np.abs(a.points[:, 2]) < 1e-6
    on_axis = np.abs(a.points[:, :2]).max(axis=1) < 1e-6
    assert np.all(on_plane | on_axis)
    assert a.diagnostics["attempts"] == 100


def test_witness_sample_annulus_and_filters(xy_z2):
    system = milnor_set_system(xy_z2)
    ws = witness_sample(system, (0.2, 0.4), 100, 0, exclude=lambda X: X[:, 2] > 0,
                        keep=lambda X: np.abs(X[:, 2]) > 1e-3)
    assert np.all((ws.radii >= 0.2) & (ws.radii <= 0.4))
    assert np.all(np.abs(ws.points[:, 2]) > 1e-3)
    assert np.array_equal(ws.excluded, ws.points[:, 2] > 0)
    with pytest.raises(ValueError):
        witness_sample(system, 0.2, 0, 0)


def test_sphere_seeds_cover_the_sphere():
    S = sphere_seeds(3, 500, 0)
    assert np.allclose(np.linalg.norm(S, axis=1), 1)
    assert np.abs(S.mean(axis=0)).max() < 0.05
    assert np.array_equal(S, sphere_seeds(3, 500, 0))


def _circles(n=60, gap=0.0):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    A = np.column_stack([np.cos(t), np.sin(t), np.zeros(n)])
    B = A + np.array([2.0 + gap, 0.0, 0.0])
    P = np.vstack([A, B])
    return WitnessSet(P, np.zeros(len(P)), np.full(len(P), -1), np.zeros(len(P), dtype=bool))


def test_clustering_separates_distant_pieces():
    assert cluster_components(_circles(gap=1.0), 0.2).n_components == 2
    # touching circles merge
    assert cluster_components(_circles(gap=0.0), 0.2).n_components == 1


def test_barrier_cuts_links():
    ws = _circles(gap=0.0)
    wall = lambda A, B: (A[:, 0] - 0.99) * (B[:, 0] - 0.99) < 0  # noqa: E731
    out = cluster_components(ws, 0.2, barrier=wall)
    assert out.n_components > 1
    labels = out.component
    left = out.points[:, 0] < 0.99
    assert set(labels[left]).isdisjoint(labels[~left])


def test_excluded_points_are_not_clustered():
    ws = _circles(gap=1.0)
    ws.excluded[:60] = True
    out = cluster_components(ws, 0.2)
    assert out.n_components == 1
    assert np.all(out.component[:60] == -1)
    assert len(out.retained()) == 60


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-3, 1e-12])) == 2
    assert numerical_rank(np.zeros((2, 3))) == 0
