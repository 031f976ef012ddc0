"""Polynomial reductions between orientation problem variants.

Three constructions, each returning the reduced instance plus a
ReductionMap that lets orientations of the reduced instance be pulled
back to the original edge set:

* ``pco_to_eo``: partial parity constraints to all-even constraints.
  Odd-constrained vertices get a pendant whose edge is parity-forced
  inward; unconstrained vertices are joined to a shared hub vertex whose
  edges soak up their parity freedom.
* ``pco_dec_to_eo_2dec``: disjoint exact conflicts of any size down to
  conflict pairs, routing each conflict of size three or more through a
  switching network (see switching.py).
* ``eo_dsc_to_eo_2dec``: disjoint subset conflicts down to conflict
  pairs via a fan gadget that re-attaches the conflict edges to arm
  vertices and detects the all-inward pattern at a hub.

All gadget vertices are even-constrained, so the reduced instances are
plain even-orientation instances. Construction order is fixed (vertices
in original order, conflicts in list order, members by edge id) so a
given input always produces the identical reduced instance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ConflictKind, Instance, InstanceBuilder, Orientation
from .errors import InvalidInstanceError
from .switching import emit_network, finish_network_inputs

# Reduced head vertex paired with the original head it stands for.
HeadPair = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class ReductionMap:
    """Correspondence between an instance and its reduced form.

    ``edge_map[e]`` is the reduced id of original edge e, and
    ``head_map[e]`` lists the two reduced endpoints together with the
    original endpoint each one encodes. Gadget vertices and edges are
    listed with a role tag for inspection and debugging.
    """

    edge_map: tuple[int, ...]
    head_map: tuple[HeadPair, ...]
    new_vertices: tuple[tuple[int, str], ...]
    new_edges: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        assert len(self.edge_map) == len(self.head_map)
        assert len(set(self.edge_map)) == len(self.edge_map)


def pull_back(reduced: Orientation, rmap: ReductionMap) -> Orientation:
    """Restrict an orientation of the reduced instance to the original edges."""
    heads = []
    for e in range(len(rmap.edge_map)):
        rh = reduced.heads[rmap.edge_map[e]]
        (ra, oa), (rb, ob) = rmap.head_map[e]
        if rh == ra:
            heads.append(oa)
        else:
            assert rh == rb
            heads.append(ob)
    return Orientation(tuple(heads))


def _carry_forced(b: InstanceBuilder, inst: Instance, rmap: ReductionMap) -> None:
    for e, head in sorted(inst.forced.items()):
        (ra, oa), (rb, ob) = rmap.head_map[e]
        b.force(rmap.edge_map[e], ra if head == oa else rb)


def pco_to_eo(inst: Instance, conflict_mode: str = "none") -> tuple[Instance, ReductionMap]:
    """Reduce parity constraints to the all-even special case.

    ``conflict_mode`` declares the conflict kinds present: "none",
    "exact", or "subset". Exact conflicts of odd size grow by the new
    edge at their vertex (the pendant edge at odd-constrained vertices,
    the hub edge at unconstrained ones); parity forces that edge's
    membership in the incoming set whenever the original set was all
    incoming, so equality checks transfer. Subset conflicts and
    even-size exact conflicts pass through untouched. Odd-size exact
    conflicts at even-constrained vertices cannot occur on normalized
    input and are rejected.
    """
    kinds = {c.kind for c in inst.conflicts}
    allowed = {
        "none": set(),
        "exact": {ConflictKind.EXACT},
        "subset": {ConflictKind.SUBSET},
    }
    if conflict_mode not in allowed:
        raise InvalidInstanceError(f"unknown conflict mode {conflict_mode!r}")
    if not kinds <= allowed[conflict_mode]:
        raise InvalidInstanceError(
            f"conflict kinds {sorted(k.value for k in kinds)} do not match mode {conflict_mode!r}"
        )

    g = inst.graph
    n = g.vertex_count
    b = InstanceBuilder()
    for _ in range(n):
        b.add_vertex(0)

    new_vertices: list[tuple[int, str]] = []
    new_edges: list[tuple[int, str]] = []
    edge_map = []
    head_map: list[HeadPair] = []
    for e, (u, v) in enumerate(g.edges):
        re = b.add_edge(u, v)
        edge_map.append(re)
        head_map.append(((u, u), (v, v)))

    # Pendants for odd-constrained vertices; the pendant is even, so its
    # edge always points at the original vertex, shifting its target
    # parity from odd to even.
    grown: dict[int, int] = {}  # vertex -> new edge joining it
    for v in range(n):
        if inst.parity.get(v) == 1:
            dummy = b.add_vertex(0)
            e = b.add_edge(v, dummy)
            new_vertices.append((dummy, "parity-dummy"))
            new_edges.append((e, "parity-dummy-edge"))
            grown[v] = e

    unconstrained = [v for v in range(n) if v not in inst.parity]
    if unconstrained:
        hub = b.add_vertex(0)
        new_vertices.append((hub, "float-hub"))
        for v in unconstrained:
            e = b.add_edge(v, hub)
            new_edges.append((e, "float-hub-edge"))
            grown[v] = e
        if (len(g.edges) + len(grown)) % 2 == 1:
            pendant = b.add_vertex(0)
            e = b.add_edge(hub, pendant)
            new_vertices.append((pendant, "float-hub-pendant"))
            new_edges.append((e, "float-hub-pendant-edge"))

    for c in inst.conflicts:
        members = tuple(edge_map[e] for e in sorted(c.edges))
        if c.kind is ConflictKind.EXACT and c.size % 2 == 1:
            if c.vertex not in grown:
                raise InvalidInstanceError(
                    f"odd exact conflict at even-constrained vertex {c.vertex}; normalize first"
                )
            members = members + (grown[c.vertex],)
        b.add_conflict(c.vertex, members, c.kind)

    rmap = ReductionMap(
        edge_map=tuple(edge_map),
        head_map=tuple(head_map),
        new_vertices=tuple(new_vertices),
        new_edges=tuple(new_edges),
    )
    _carry_forced(b, inst, rmap)
    return b.build(), rmap


def _check_disjoint(inst: Instance) -> None:
    if not inst.pairwise_disjoint():
        raise InvalidInstanceError("conflicts are not pairwise disjoint")


def pco_dec_to_eo_2dec(inst: Instance) -> tuple[Instance, ReductionMap]:
    """Disjoint exact conflicts of any size to disjoint conflict pairs.

    Every original vertex v becomes a two- or three-vertex path: plain
    edges re-attach to the outer path vertex, and the inner one carries
    the parity bookkeeping (a third, pendant vertex when v wants even
    indegree; a shared hub edge when v is unconstrained). Conflicts of
    size k >= 3 route their members through a width-k switching network
    whose first two outputs land on the outer path vertex as a conflict
    pair and whose remaining k-2 outputs land on the inner one; network
    right-count conservation makes that pair fire exactly when the
    original conflict would.
    """
    for c in inst.conflicts:
        if c.kind is not ConflictKind.EXACT:
            raise InvalidInstanceError(f"conflict at vertex {c.vertex} is not exact")
        if c.size < 2:
            raise InvalidInstanceError(
                f"exact conflict of size {c.size} at vertex {c.vertex} is not reducible"
            )
    _check_disjoint(inst)

    g = inst.graph
    n = g.vertex_count
    b = InstanceBuilder()
    new_vertices: list[tuple[int, str]] = []
    new_edges: list[tuple[int, str]] = []

    outer = []
    inner = []
    for v in range(n):
        v1 = b.add_vertex(0)
        v2 = b.add_vertex(0)
        outer.append(v1)
        inner.append(v2)
        new_vertices.append((v1, "path-outer"))
        new_vertices.append((v2, "path-inner"))
        if inst.parity.get(v) == 0:
            v3 = b.add_vertex(0)
            new_vertices.append((v3, "path-cap"))
    # Recover cap ids without a second list: they follow their v2.
    caps = {v: inner[v] + 1 for v in range(n) if inst.parity.get(v) == 0}

    unconstrained = [v for v in range(n) if v not in inst.parity]
    # Total reduced edge count is m + #odd-constrained (mod 2): networks
    # and the per-vertex gadgets all contribute evenly. An odd total
    # would make the hub's component infeasible outright, so a pendant
    # evens it up. Without a hub an odd total means some all-constrained
    # component was infeasible already, faithfully preserved.
    odd_total = (len(g.edges) + sum(inst.parity.values())) % 2 == 1
    hub = None
    hub_pendant = None
    if unconstrained:
        hub = b.add_vertex(0)
        new_vertices.append((hub, "float-hub"))
        if odd_total:
            hub_pendant = b.add_vertex(0)
            new_vertices.append((hub_pendant, "float-hub-pendant"))

    # Networks for the big conflicts; their input edges are the original
    # edge images, created afterwards.
    slot_of: dict[tuple[int, int], int] = {}  # (edge, endpoint) -> slot vertex
    emissions = []
    for c in inst.conflicts:
        if c.size < 3:
            continue
        members = sorted(c.edges)
        ends = [outer[c.vertex]] * 2 + [inner[c.vertex]] * (c.size - 2)
        mark = b.edge_count
        em = emit_network(b, c.size, ends)
        for slot, e in enumerate(members):
            slot_of[(e, c.vertex)] = em.input_slots[slot]
        b.add_conflict(outer[c.vertex], (em.outputs[0], em.outputs[1]), ConflictKind.EXACT)
        emissions.append((c, em))
        new_vertices.extend((v, "net-internal") for v in em.new_vertices)
        new_edges.extend(
            (e, "net-output" if e in em.outputs else "net-edge") for e in em.new_edges
        )
        assert len(em.new_edges) % 2 == 0 and mark + len(em.new_edges) == b.edge_count

    edge_map = []
    head_map: list[HeadPair] = []
    for e, (u, v) in enumerate(g.edges):
        au = slot_of.get((e, u), outer[u])
        av = slot_of.get((e, v), outer[v])
        re = b.add_edge(au, av)
        edge_map.append(re)
        head_map.append(((au, u), (av, v)))

    for c, em in emissions:
        finish_network_inputs(b, em, [edge_map[e] for e in sorted(c.edges)])

    for v in range(n):
        e = b.add_edge(outer[v], inner[v])
        new_edges.append((e, "path-link"))
        if v in caps:
            e = b.add_edge(inner[v], caps[v])
            new_edges.append((e, "path-cap-edge"))
    if hub is not None:
        for v in unconstrained:
            e = b.add_edge(inner[v], hub)
            new_edges.append((e, "float-hub-edge"))
        if hub_pendant is not None:
            e = b.add_edge(hub, hub_pendant)
            new_edges.append((e, "float-hub-pendant-edge"))

    for c in inst.conflicts:
        if c.size == 2:
            pair = tuple(edge_map[e] for e in sorted(c.edges))
            b.add_conflict(outer[c.vertex], pair, ConflictKind.EXACT)

    rmap = ReductionMap(
        edge_map=tuple(edge_map),
        head_map=tuple(head_map),
        new_vertices=tuple(new_vertices),
        new_edges=tuple(new_edges),
    )
    _carry_forced(b, inst, rmap)
    out = b.build()
    assert all(c.size == 2 for c in out.conflicts)
    return out, rmap


def eo_dsc_to_eo_2dec(inst: Instance) -> tuple[Instance, ReductionMap]:
    """Disjoint subset conflicts of any size to disjoint conflict pairs.

    Each conflict re-attaches its k members to fresh degree-2 arm
    vertices hanging off a hub; evenness propagates "member oriented
    inward" through each arm, and the hub's anchor edge back to the
    conflict vertex ends up inward exactly when an odd number of members
    are. A pendant keeps the hub even, and for odd k a second pendant at
    the conflict vertex repairs its parity. The all-members-inward
    pattern, and only it, leaves the hub's incoming set equal to the
    anchor/pendant pair, which is the one forbidden pair.
    """
    for v, p in inst.parity.items():
        if p != 0:
            raise InvalidInstanceError(f"vertex {v} is not even-constrained")
    if len(inst.parity) != inst.graph.vertex_count:
        raise InvalidInstanceError("every vertex must be even-constrained")
    for c in inst.conflicts:
        if c.kind is not ConflictKind.SUBSET:
            raise InvalidInstanceError(f"conflict at vertex {c.vertex} is not subset")
    _check_disjoint(inst)

    g = inst.graph
    n = g.vertex_count
    b = InstanceBuilder()
    for _ in range(n):
        b.add_vertex(0)

    new_vertices: list[tuple[int, str]] = []
    new_edges: list[tuple[int, str]] = []
    arm_of: dict[tuple[int, int], int] = {}  # (edge, endpoint) -> arm vertex
    gadgets = []
    for c in inst.conflicts:
        members = sorted(c.edges)
        hub = b.add_vertex(0)
        new_vertices.append((hub, "fan-hub"))
        arms = []
        for e in members:
            arm = b.add_vertex(0)
            arms.append(arm)
            arm_of[(e, c.vertex)] = arm
            new_vertices.append((arm, "fan-arm"))
        pendant = b.add_vertex(0)
        new_vertices.append((pendant, "fan-pendant"))
        parity_fix = None
        if c.size % 2 == 1:
            parity_fix = b.add_vertex(0)
            new_vertices.append((parity_fix, "parity-pendant"))
        gadgets.append((c, hub, arms, pendant, parity_fix))

    edge_map = []
    head_map: list[HeadPair] = []
    for e, (u, v) in enumerate(g.edges):
        au = arm_of.get((e, u), u)
        av = arm_of.get((e, v), v)
        re = b.add_edge(au, av)
        edge_map.append(re)
        head_map.append(((au, u), (av, v)))

    for c, hub, arms, pendant, parity_fix in gadgets:
        mark = b.edge_count
        for arm in arms:
            e = b.add_edge(hub, arm)
            new_edges.append((e, "fan-arm-edge"))
        anchor = b.add_edge(hub, c.vertex)
        new_edges.append((anchor, "fan-anchor-edge"))
        brace = b.add_edge(hub, pendant)
        new_edges.append((brace, "fan-pendant-edge"))
        if parity_fix is not None:
            e = b.add_edge(parity_fix, c.vertex)
            new_edges.append((e, "parity-pendant-edge"))
        assert (len(b._edges) - mark) % 2 == 0
        b.add_conflict(hub, (anchor, brace), ConflictKind.EXACT)

    rmap = ReductionMap(
        edge_map=tuple(edge_map),
        head_map=tuple(head_map),
        new_vertices=tuple(new_vertices),
        new_edges=tuple(new_edges),
    )
    _carry_forced(b, inst, rmap)
    out = b.build()
    assert all(c.size == 2 for c in out.conflicts)
    return out, rmap
