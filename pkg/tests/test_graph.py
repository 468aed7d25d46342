import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from argseg import ARG, relational_attribute

finite_coord = st.floats(min_value=-1000, max_value=1000, allow_nan=False)
positive_dmax = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False)


class TestRelationalAttribute:
    def test_identical_centroids(self):
        assert relational_attribute((10, 10), (10, 10), 100) == (0.0, 0.0)

    def test_maximum_separation(self):
        assert relational_attribute((0, 0), (100, 0), 100) == (0.5, 0.0)

    def test_hand_evaluated(self):
        nu = relational_attribute((3, 4), (0, 0), 10)
        assert nu == pytest.approx((-0.15, -0.20), abs=1e-12)

    def test_nonpositive_dmax_rejected(self):
        with pytest.raises(ValueError):
            relational_attribute((0, 0), (1, 1), 0)
        with pytest.raises(ValueError):
            relational_attribute((0, 0), (1, 1), -5)

    @given(finite_coord, finite_coord, finite_coord, finite_coord, positive_dmax)
    def test_antisymmetry(self, ax, ay, bx, by, d):
        fwd = relational_attribute((ax, ay), (bx, by), d)
        rev = relational_attribute((bx, by), (ax, ay), d)
        assert fwd[0] == -rev[0] and fwd[1] == -rev[1]

    @given(st.integers(0, 10**6))
    def test_components_bounded_when_separation_within_dmax(self, seed):
        rng = random.Random(seed)
        a = (rng.uniform(0, 100), rng.uniform(0, 100))
        b = (rng.uniform(0, 100), rng.uniform(0, 100))
        d = math.dist(a, b) * rng.uniform(1.0, 3.0) + 1e-9
        nu = relational_attribute(a, b, d)
        assert abs(nu[0]) <= 0.5 and abs(nu[1]) <= 0.5


class TestARG:
    def build(self):
        g = ARG(d_max=10.0, attribute_arity=3)
        g.add_vertex(0, (0.1, 0.2, 0.3), (0.0, 0.0))
        g.add_vertex(1, (0.4, 0.5, 0.6), (10.0, 0.0), pixel_count=7)
        g.add_adjacency(0, 1)
        return g

    def test_adjacency_is_symmetric_with_opposite_nu(self):
        g = self.build()
        fwd = g.edges[g.edge_id(0, 1)]
        rev = g.edges[g.edge_id(1, 0)]
        assert fwd.nu == (0.5, 0.0)
        assert rev.nu == (-0.5, -0.0)
        g.validate()

    def test_validate_flags_missing_reverse_edge(self):
        g = ARG(d_max=10.0, attribute_arity=1)
        g.add_vertex(0, (0.5,), (0, 0))
        g.add_vertex(1, (0.6,), (1, 1))
        g.add_edge(0, 1)
        with pytest.raises(ValueError, match="asymmetric"):
            g.validate()

    def test_rejects_bad_construction(self):
        g = ARG(d_max=5.0, attribute_arity=3)
        g.add_vertex(0, (0, 0, 0), (0, 0))
        with pytest.raises(ValueError):
            g.add_vertex(0, (0, 0, 0), (1, 1))  # duplicate id
        with pytest.raises(ValueError):
            g.add_vertex(1, (0, 0), (1, 1))  # wrong arity
        with pytest.raises(ValueError):
            g.add_vertex(1, (0, 0, 0), (1, 1), pixel_count=0)
        g.add_vertex(1, (0, 0, 0), (1, 1))
        with pytest.raises(ValueError):
            g.add_edge(0, 0)
        with pytest.raises(KeyError):
            g.add_edge(0, 9)
        g.add_edge(0, 1)
        with pytest.raises(ValueError):
            g.add_edge(0, 1)

    def test_rejects_nonpositive_dmax(self):
        with pytest.raises(ValueError):
            ARG(d_max=0.0)

    def test_copy_is_deep_and_equal(self):
        g = self.build()
        h = g.copy()
        assert g == h
        h.set_label(0, 5)
        assert g != h
        assert g.vertex(0).label is None

    def test_incident_edges_cover_both_orientations(self):
        g = self.build()
        assert len(g.incident_edges(0)) == 2
        assert len(g.incident_edges(1)) == 2
