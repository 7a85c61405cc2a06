import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from projconst import (
    TABLE_SPACES,
    NormedSpaceSpec,
    construct_known_system,
    norm_from_system,
    table_functionals,
    table_norm,
    unit_ball_vertices,
)
from projconst.errors import RankError, ShapeError, UnsupportedConstructionError

EVALUABLE = [k for k, v in TABLE_SPACES.items() if v.evaluable]
finite = st.floats(-10, 10, allow_nan=False)


@pytest.mark.parametrize("space_id", EVALUABLE)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_closed_form_matches_functional_form(space_id, seed):
    space = TABLE_SPACES[space_id]
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((5, space.n))
    if space.field == "complex":
        x = x + 1j * rng.standard_normal((5, space.n))
    spec = table_functionals(space_id)
    np.testing.assert_allclose(table_norm(space_id, x), norm_from_system(spec, x), rtol=1e-12)


@given(arrays(float, 2, elements=finite), arrays(float, 2, elements=finite), finite)
def test_hexagon_norm_axioms(x, y, c):
    f = lambda v: table_norm("R2-hexagon", v)
    assert f(x + y) <= f(x) + f(y) + 1e-9
    assert f(c * x) == pytest.approx(abs(c) * f(x), abs=1e-9)


@pytest.mark.parametrize("space_id", ["R2-hexagon", "R3-dodecahedron"])
def test_closed_form_proportional_to_system_norm(space_id):
    n = TABLE_SPACES[space_id].n
    S = construct_known_system(n, "real")
    x = np.random.default_rng(0).standard_normal((50, n))
    ratio = table_norm(space_id, x) / norm_from_system(NormedSpaceSpec.from_system(S), x)
    assert np.ptp(ratio) < 1e-12


def test_vertex_counts():
    assert len(unit_ball_vertices(table_functionals("R2-hexagon"))) == 6
    assert len(unit_ball_vertices(table_functionals("R3-dodecahedron"))) == 20


def test_pointwise_values():
    e = np.eye(7)
    assert table_norm("R7", e[0] + e[1]) == pytest.approx(2.0)
    assert table_norm("C3", [1, 1, 1]) == pytest.approx(np.sqrt(3))
    assert table_norm("R2-hexagon", [1, 0]) == pytest.approx(2.0)


def test_errors():
    with pytest.raises(UnsupportedConstructionError):
        table_norm("R23", np.zeros(23))
    with pytest.raises(UnsupportedConstructionError):
        table_functionals("R23")
    with pytest.raises(KeyError):
        table_norm("R5", [0] * 5)
    with pytest.raises(ShapeError):
        table_norm("R7", [1, 2])
    with pytest.raises(RankError):
        NormedSpaceSpec("real", [[1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(ShapeError):
        norm_from_system(table_functionals("C2"), [1, 2, 3])
    with pytest.raises(ShapeError):
        unit_ball_vertices(table_functionals("C2"))
