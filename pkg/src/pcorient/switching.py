"""Right-count-conserving switching gadgets with k inputs and k outputs.

The base cell has two internal vertices joined by a parallel edge pair;
its two inputs land on one side, its two outputs leave the other, and
four exact conflict pairs plus even parity everywhere pin the behavior:
the number of inputs oriented inward always equals the number of outputs
oriented outward, and with mixed inputs either output can be the outward
one. Larger gadgets are binary trees of cells; each non-root cell
forwards one output to the next stage and exports the other.

Odd feed widths leave one unused input slot in a stage, plugged by a
two-edge pendant path that forces the slot edge outward. A cell with a
plugged input slot can pass at most one rightward edge, so its export is
plugged too (a single even pendant forcing it inward); that keeps the
export count at k exactly and keeps every reachable right-count
routable. Neither plug carries weight, so conservation is unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .core import ConflictKind, Instance, InstanceBuilder
from .errors import InvalidInstanceError
from .oracle import iter_feasible


@dataclass
class NetEmission:
    """Bookkeeping from emitting one network into a builder.

    Input edges are not created here: their far ends may belong to the
    host graph or to another network, so the caller adds them and then
    calls ``finish_network_inputs`` to place the first-stage conflict
    pairs.
    """

    k: int
    stages: tuple[int, ...]
    copy_u: list[int]
    copy_w: list[int]
    copy_stage: list[int]
    input_slots: list[int]  # u-vertex per real input slot, a_1..a_k order
    slot_copy: list[int]
    copy_input_edges: list[list[int]]
    outputs: list[int]  # edge ids b_1..b_k; b_1, b_2 are the root pair
    output_ends: list[int]  # outer endpoint of each b_i
    nonleaf_vertices: list[int]
    new_vertices: list[int] = field(default_factory=list)
    new_edges: list[int] = field(default_factory=list)


def emit_network(b: InstanceBuilder, k: int, output_ends: list[int] | None) -> NetEmission:
    """Emit internal structure, plugs, and output edges for a width-k network.

    ``output_ends`` gives the outer endpoint for each of the k exported
    edges; None allocates a fresh unconstrained leaf per export instead.
    """
    if k < 2:
        raise InvalidInstanceError(f"switching network needs width >= 2, got {k}")
    stages = []
    copies = 1
    width = k
    while width > 1:
        width = (width + 1) // 2
        stages.append(width)
    if not stages:
        stages = [1]
    em = NetEmission(
        k=k,
        stages=tuple(stages),
        copy_u=[],
        copy_w=[],
        copy_stage=[],
        input_slots=[],
        slot_copy=[],
        copy_input_edges=[],
        outputs=[],
        output_ends=[],
        nonleaf_vertices=[],
    )

    def new_vertex(parity: int | None) -> int:
        v = b.add_vertex(parity)
        em.new_vertices.append(v)
        return v

    def new_edge(u: int, v: int) -> int:
        e = b.add_edge(u, v)
        em.new_edges.append(e)
        return e

    stage_first = []  # index of each stage's first copy
    for si, count in enumerate(stages):
        stage_first.append(len(em.copy_u))
        for _ in range(count):
            u = new_vertex(0)
            w = new_vertex(0)
            c1 = new_edge(u, w)
            c2 = new_edge(u, w)
            b.add_conflict(u, (c1, c2), ConflictKind.EXACT)
            b.add_conflict(w, (c1, c2), ConflictKind.EXACT)
            em.copy_u.append(u)
            em.copy_w.append(w)
            em.copy_stage.append(si)
            em.copy_input_edges.append([])
            em.nonleaf_vertices.extend((u, w))

    capped_copies: set[int] = set()

    def plug_input_slot(copy: int) -> None:
        # Two-edge pendant path; parity forces the slot edge out of u.
        y = new_vertex(0)
        z = new_vertex(0)
        slot_edge = new_edge(em.copy_u[copy], y)
        new_edge(y, z)
        em.copy_input_edges[copy].append(slot_edge)
        em.nonleaf_vertices.append(y)
        capped_copies.add(copy)

    # Real input slots of the first stage, in copy order.
    for s in range(k):
        copy = s // 2
        em.input_slots.append(em.copy_u[copy])
        em.slot_copy.append(copy)
    if 2 * stages[0] > k:
        plug_input_slot(stages[0] - 1)

    # Inter-stage wiring: each copy of stage i feeds one slot of stage i+1.
    forward_edge: dict[int, int] = {}
    for si in range(1, len(stages)):
        feed = list(range(stage_first[si - 1], stage_first[si]))
        for s in range(2 * stages[si]):
            copy = stage_first[si] + s // 2
            if s < len(feed):
                prev = feed[s]
                e = new_edge(em.copy_w[prev], em.copy_u[copy])
                forward_edge[prev] = e
                em.copy_input_edges[copy].append(e)
            else:
                plug_input_slot(copy)
        for copy in range(stage_first[si], stage_first[si] + stages[si]):
            ins = em.copy_input_edges[copy]
            b.add_conflict(em.copy_u[copy], tuple(ins), ConflictKind.EXACT)

    total_copies = len(em.copy_u)
    root = total_copies - 1
    # One surplus export per plugged input slot; the counts always agree.
    assert total_copies + 1 - k == len(capped_copies)
    assert root not in capped_copies

    def attach_output(copy: int, slot: int) -> int:
        if output_ends is not None:
            end = output_ends[slot]
        else:
            end = new_vertex(None)
        e = new_edge(em.copy_w[copy], end)
        em.outputs.append(e)
        em.output_ends.append(end)
        return e

    root_out1 = attach_output(root, 0)
    root_out2 = attach_output(root, 1)
    b.add_conflict(em.copy_w[root], (root_out1, root_out2), ConflictKind.EXACT)
    next_slot = 2
    for copy in range(total_copies - 1):
        if copy in capped_copies:
            z = new_vertex(0)
            export = new_edge(em.copy_w[copy], z)
        else:
            export = attach_output(copy, next_slot)
            next_slot += 1
        b.add_conflict(em.copy_w[copy], (forward_edge[copy], export), ConflictKind.EXACT)
    assert len(em.outputs) == k
    return em


def finish_network_inputs(b: InstanceBuilder, em: NetEmission, input_edges: Sequence[int]) -> None:
    """Register the k input edges and place the first-stage conflict pairs."""
    assert len(input_edges) == em.k
    for slot, e in enumerate(input_edges):
        em.copy_input_edges[em.slot_copy[slot]].append(e)
    for copy in range(em.stages[0]):
        ins = em.copy_input_edges[copy]
        assert len(ins) == 2
        b.add_conflict(em.copy_u[copy], tuple(ins), ConflictKind.EXACT)


@dataclass(frozen=True)
class SwitchingNetwork:
    """Standalone width-k network with unconstrained attachment leaves."""

    k: int
    instance: Instance
    inputs: tuple[int, ...]  # edge a_i runs input_leaves[i] -> first stage
    outputs: tuple[int, ...]  # edge b_i runs last stages -> output_leaves[i]
    input_leaves: tuple[int, ...]
    output_leaves: tuple[int, ...]
    stages: tuple[int, ...]
    copies: tuple[tuple[int, int], ...]  # (u, w) per cell
    nonleaf_count: int


def build_switching_network(k: int) -> SwitchingNetwork:
    """Assemble a standalone network for direct property checking."""
    b = InstanceBuilder()
    input_leaves = [b.add_vertex(None) for _ in range(k)]
    em = emit_network(b, k, output_ends=None)
    input_edges = [b.add_edge(input_leaves[i], em.input_slots[i]) for i in range(k)]
    finish_network_inputs(b, em, input_edges)
    return SwitchingNetwork(
        k=k,
        instance=b.build(),
        inputs=tuple(input_edges),
        outputs=tuple(em.outputs),
        input_leaves=tuple(input_leaves),
        output_leaves=tuple(em.output_ends),
        stages=em.stages,
        copies=tuple(zip(em.copy_u, em.copy_w)),
        nonleaf_count=len(em.nonleaf_vertices),
    )


def valid_output_patterns(net: SwitchingNetwork, rights: Sequence[bool]) -> set[tuple[bool, ...]]:
    """All output orientations reachable under a fixed input pattern.

    An input is right when oriented into the network, an output when
    oriented out of it. Exhaustive by backtracking over the whole gadget.
    """
    assert len(rights) == net.k
    forced = dict(net.instance.forced)
    for i, right in enumerate(rights):
        leaf = net.input_leaves[i]
        inner = net.instance.graph.other_end(net.inputs[i], leaf)
        forced[net.inputs[i]] = inner if right else leaf
    pinned = replace(net.instance, forced=forced)
    patterns = set()
    for o in iter_feasible(pinned):
        patterns.add(
            tuple(o.heads[b] == net.output_leaves[j] for j, b in enumerate(net.outputs))
        )
    return patterns
