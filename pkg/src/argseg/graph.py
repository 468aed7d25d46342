"""Attributed relational graphs over image regions.

A vertex stands for one image region and carries an attribute vector
``mu`` (mean color, each channel in [0, 1]), the region centroid in the
active frame, and the region pixel count.  A directed edge carries a
relational vector ``nu``, the centroid displacement normalized by twice
the frame diagonal ``d_max``.  Adjacency is always stored symmetrically:
whenever (v, w) is an edge, so is (w, v), with the opposite ``nu``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional


def relational_attribute(
    p_from: tuple[float, float],
    p_to: tuple[float, float],
    d_max: float,
) -> tuple[float, float]:
    """Relational vector between two centroids: (p_to - p_from) / (2 d_max)."""
    if d_max <= 0:
        raise ValueError(f"d_max must be positive, got {d_max}")
    scale = 2.0 * d_max
    return ((p_to[0] - p_from[0]) / scale, (p_to[1] - p_from[1]) / scale)


@dataclass(frozen=True)
class Vertex:
    id: int
    mu: tuple[float, ...]
    centroid: tuple[float, float]
    pixel_count: int = 1
    label: Optional[int] = None


@dataclass(frozen=True)
class Edge:
    from_id: int
    to_id: int
    nu: tuple[float, float]


class ARG:
    """Directed attributed relational graph.

    Vertices are keyed by integer id and kept in insertion order; edges
    are kept in a list so an edge can be referred to by its index.
    ``d_max`` is the normalization length (frame diagonal, in pixels)
    shared by every relational vector of the graph.
    """

    def __init__(self, d_max: float, attribute_arity: int = 3):
        if d_max <= 0:
            raise ValueError(f"d_max must be positive, got {d_max}")
        if attribute_arity < 1:
            raise ValueError(f"attribute_arity must be >= 1, got {attribute_arity}")
        self.d_max = float(d_max)
        self.attribute_arity = int(attribute_arity)
        self._vertices: dict[int, Vertex] = {}
        self._edges: list[Edge] = []
        self._edge_index: dict[tuple[int, int], int] = {}
        self._incident: dict[int, list[int]] = {}

    # -- construction -------------------------------------------------

    def add_vertex(
        self,
        vid: int,
        mu: Iterable[float],
        centroid: tuple[float, float],
        pixel_count: int = 1,
        label: Optional[int] = None,
    ) -> Vertex:
        mu = tuple(float(c) for c in mu)
        if len(mu) != self.attribute_arity:
            raise ValueError(
                f"attribute arity mismatch: expected {self.attribute_arity}, got {len(mu)}"
            )
        if vid in self._vertices:
            raise ValueError(f"duplicate vertex id {vid}")
        if pixel_count < 1:
            raise ValueError(f"pixel_count must be >= 1, got {pixel_count}")
        v = Vertex(int(vid), mu, (float(centroid[0]), float(centroid[1])),
                   int(pixel_count), label)
        self._vertices[v.id] = v
        self._incident[v.id] = []
        return v

    def add_edge(
        self,
        from_id: int,
        to_id: int,
        nu: Optional[tuple[float, float]] = None,
    ) -> Edge:
        """Add one directed edge.  ``nu`` defaults to the value computed
        from the endpoint centroids.  Symmetric storage is the caller's
        responsibility (see add_adjacency); validate() checks it."""
        if from_id == to_id:
            raise ValueError(f"self-loop on vertex {from_id}")
        if from_id not in self._vertices or to_id not in self._vertices:
            raise KeyError(f"edge ({from_id}, {to_id}) references a missing vertex")
        if (from_id, to_id) in self._edge_index:
            raise ValueError(f"duplicate edge ({from_id}, {to_id})")
        if nu is None:
            nu = relational_attribute(
                self._vertices[from_id].centroid,
                self._vertices[to_id].centroid,
                self.d_max,
            )
        e = Edge(int(from_id), int(to_id), (float(nu[0]), float(nu[1])))
        idx = len(self._edges)
        self._edges.append(e)
        self._edge_index[(e.from_id, e.to_id)] = idx
        self._incident[e.from_id].append(idx)
        self._incident[e.to_id].append(idx)
        return e

    def add_adjacency(self, a: int, b: int) -> None:
        """Add both directed edges between a and b, nu from centroids."""
        self.add_edge(a, b)
        self.add_edge(b, a)

    def set_label(self, vid: int, label: Optional[int]) -> None:
        self._vertices[vid] = replace(self._vertices[vid], label=label)

    # -- access --------------------------------------------------------

    @property
    def vertices(self) -> dict[int, Vertex]:
        return self._vertices

    @property
    def edges(self) -> list[Edge]:
        return self._edges

    def vertex(self, vid: int) -> Vertex:
        try:
            return self._vertices[vid]
        except KeyError:
            raise KeyError(f"unknown vertex id {vid}") from None

    def vertex_ids(self) -> list[int]:
        return list(self._vertices)

    def incident_edges(self, vid: int) -> list[int]:
        """Indices of edges touching vid, in either orientation."""
        return list(self._incident[vid])

    def edge_id(self, from_id: int, to_id: int) -> int:
        return self._edge_index[(from_id, to_id)]

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def copy(self) -> "ARG":
        g = ARG(self.d_max, self.attribute_arity)
        for v in self._vertices.values():
            g.add_vertex(v.id, v.mu, v.centroid, v.pixel_count, v.label)
        for e in self._edges:
            g.add_edge(e.from_id, e.to_id, e.nu)
        return g

    def validate(self) -> None:
        """Raise ValueError on any structural invariant breach."""
        for e in self._edges:
            if (e.to_id, e.from_id) not in self._edge_index:
                raise ValueError(
                    f"asymmetric adjacency: ({e.from_id}, {e.to_id}) has no reverse edge"
                )
        for v in self._vertices.values():
            if len(v.mu) != self.attribute_arity:
                raise ValueError(f"vertex {v.id} has arity {len(v.mu)}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ARG):
            return NotImplemented
        return (
            self.d_max == other.d_max
            and self.attribute_arity == other.attribute_arity
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        return (f"ARG(|V|={len(self._vertices)}, |E|={len(self._edges)}, "
                f"d_max={self.d_max}, arity={self.attribute_arity})")
