"""Butterfly graphs, their components and the classification checks.

Graphs are built over three node sets:

* ``P``  prototypes ``(w, h, t, e)`` of model A,
* ``Q``  complete prototypes ``(w, h, t, e, eps)``; every edge flips ``eps``,
* ``S``  reduced classes, identified with their ``e`` value.

Components are the classes of the equivalence relation generated by the
edges, computed with a union-find over node indices.  Predicted component
counts are stored verbatim as data tables so that a disagreement shows up as
a report flag, never as a silent adjustment.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from math import isqrt
from typing import Hashable, Iterable, Sequence

import networkx as nx
from networkx.utils import UnionFind

from .butterfly import INF, ConsistencyError, MoveLabel, apply_tuple, label, max_finite_q, reduced_move
from .prototypes import GENUS3, GENUS4, MODEL_A, ReducedClass, enumerate_reduced, enumerate_tuples

SET_P = "P"
SET_Q = "Q"
SET_S = "S"

# Exceptional discriminants with their component counts of the reduced set, genus 3.
S_EXCEPTIONS_G3: dict[int, int] = {
    20: 1, 36: 1, 41: 2, 73: 2, 97: 2,
    112: 2, 148: 3, 196: 3, 244: 3, 292: 3,
    304: 2, 436: 3, 484: 3, 676: 3, 1684: 3,
}
P_EXCEPTIONS_G3: dict[int, int] = {41: 2, 68: 2, 100: 2}
Q_EXCEPTIONS_G3: dict[int, int] = {41: 4, 48: 2, 68: 2, 100: 2}

# Discriminants excluded from the generic statement on the genus-4 reduced set.
S_EXCEPTIONS_G4: frozenset[int] = frozenset({
    12, 16, 17, 20, 25, 28, 36, 73, 88, 97, 105, 112, 121, 124, 136, 145, 148,
    169, 172, 184, 193, 196, 201, 217, 220, 241, 244, 265, 268, 292, 304,
    316, 364, 385, 436, 484, 556, 604, 676, 796, 844, 1684,
})
P_EXCEPTIONS_G4: dict[int, int] = {36: 3, 41: 3, 52: 3, 68: 3, 84: 3, 100: 3}


def is_discriminant(D: int) -> bool:
    return D > 0 and D % 4 in (0, 1)


# -- graphs ----------------------------------------------------------------


@dataclass(frozen=True)
class ButterflyGraph:
    """Directed multigraph of Butterfly moves on a finite node set.

    ``nodes`` are tuples in canonical order; ``edges`` are
    ``(source index, target index, move parameter)``.
    """

    disc: int
    genus: int
    kind: str
    nodes: tuple[tuple, ...]
    edges: tuple[tuple[int, int, MoveLabel], ...]

    def components(self) -> list[list[int]]:
        """Connected components of the underlying undirected graph, as sorted index lists."""
        uf = UnionFind(range(len(self.nodes)))
        for i, j, _ in self.edges:
            uf.union(i, j)
        comps = [sorted(c) for c in uf.to_sets()]
        comps.sort()
        return comps

    def component_nodes(self) -> list[list[tuple]]:
        return [[self.nodes[i] for i in c] for c in self.components()]

    def undirected(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(len(self.nodes)))
        g.add_edges_from((i, j) for i, j, _ in self.edges)
        return g

    def labeled_edges(self) -> list[tuple[tuple, tuple, str]]:
        return [(self.nodes[i], self.nodes[j], label(q)) for i, j, q in self.edges]

    def to_dot(self) -> str:
        def name(node: tuple) -> str:
            if self.kind == SET_S:
                return f"[{node[0]}]"
            return ",".join(str(x) if not isinstance(x, str) else x for x in node)

        lines = [f'digraph "{self.kind}_{self.disc}_g{self.genus}" {{']
        for i, node in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{name(node)}"];')
        for i, j, q in self.edges:
            lines.append(f'  n{i} -> n{j} [label="{label(q)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _reduced_q_bound(e: int, D: int) -> int:
    # -e - 4q must satisfy (e' + 4)^2 < D, so 4q < |e| + sqrt(D) + 4
    return (abs(e) + isqrt(D) + 8) // 4


def build_graph(D: int, genus: int = GENUS3, kind: str = SET_P) -> ButterflyGraph:
    """Butterfly graph on ``P``, ``Q`` or ``S`` for discriminant ``D``.

    For ``P`` and ``Q`` every node gets one edge per admissible finite ``q``
    and one for ``q = INF``.  Reduced classes only use finite ``q``, since
    ``B_INF`` on ``(w, 1, 0, e)`` coincides with ``B_1``.
    """
    if kind == SET_S:
        nodes = [(r.e,) for r in enumerate_reduced(D, genus)]
        index = {n: i for i, n in enumerate(nodes)}
        edges = []
        for i, (e,) in enumerate(nodes):
            r = ReducedClass(e, D, genus)
            for q in range(1, _reduced_q_bound(e, D) + 1):
                img = reduced_move(r, q)
                if img is not None:
                    edges.append((i, index[(img.e,)], q))
        return ButterflyGraph(D, genus, kind, tuple(nodes), tuple(edges))

    protos = enumerate_tuples(D, genus, MODEL_A)
    if kind == SET_P:
        nodes = protos
    elif kind == SET_Q:
        if genus != GENUS3:
            raise ValueError("complete prototypes are defined in genus 3 only")
        nodes = [p + (s,) for p in protos for s in (1, -1)]
    else:
        raise ValueError(f"unknown set {kind!r}; expected P, Q or S")
    index = {n: i for i, n in enumerate(nodes)}
    edges = []
    for i, node in enumerate(nodes):
        w, h, t, e = node[:4]
        qs: list[MoveLabel] = list(range(1, max_finite_q(h, e, D) + 1))
        qs.append(INF)
        for q in qs:
            img = apply_tuple(w, h, t, e, D, q, genus)
            if kind == SET_Q:
                img = img + (-node[4],)
            j = index.get(img)
            if j is None:
                raise ConsistencyError(f"image {img} of {node} under {label(q)} is not in the D={D} node set")
            edges.append((i, j, q))
    return ButterflyGraph(D, genus, kind, tuple(nodes), tuple(edges))


def component_count(D: int, genus: int = GENUS3, kind: str = SET_P) -> int:
    """Number of components; 0 for an empty set."""
    return len(build_graph(D, genus, kind).components())


def q_components_via_parity(D: int, graph: ButterflyGraph | None = None) -> int:
    """Components of ``Q`` predicted from the ``P`` graph.

    A ``P`` component lifts to one ``Q`` component if it carries an odd closed
    walk (self-loops count) and to two otherwise.
    """
    g = graph if graph is not None else build_graph(D, GENUS3, SET_P)
    und = g.undirected()
    total = 0
    for comp in g.components():
        total += 2 if nx.is_bipartite(und.subgraph(comp)) else 1
    return total


# -- predictions -------------------------------------------------------------


def _residue_classes(values: Iterable[int], classes: Sequence[Sequence[int]], modulus: int) -> list[list[int]]:
    """Partition ``values`` by residue class, dropping empty parts."""
    out = []
    for cls in classes:
        part = sorted(v for v in values if v % modulus in {c % modulus for c in cls})
        if part:
            out.append(part)
    return out


def predicted_s_partition(D: int, genus: int, values: Sequence[int]) -> list[list[int]] | None:
    """Partition of the reduced set asserted by the classification, or None if no claim is made."""
    if genus == GENUS3:
        if D <= 16 or D % 8 not in (0, 1, 4) or D in S_EXCEPTIONS_G3:
            return None
        if D % 16 == 4:
            return _residue_classes(values, [[2], [-2]], 8)
        return [sorted(values)]
    if D < 12 or D in S_EXCEPTIONS_G4:
        return None
    if D % 8 == 4:
        return _residue_classes(values, [[0, 4], [2], [-2]], 8)
    if D % 8 == 1:
        return _residue_classes(values, [[1, 3], [-1, -3]], 8)
    if D % 8 == 0:
        return _residue_classes(values, [[0, 4], [2, -2]], 8)
    return [sorted(values)]


def predicted_s_count(D: int, genus: int) -> int | None:
    if genus == GENUS3:
        if D <= 16 or D % 8 not in (0, 1, 4):
            return None
        if D in S_EXCEPTIONS_G3:
            return S_EXCEPTIONS_G3[D]
        return 2 if D % 16 == 4 else 1
    if D < 12 or D in S_EXCEPTIONS_G4:
        return None
    return {4: 3, 1: 2, 0: 2}.get(D % 8, 1)


def predicted_p_count(D: int, genus: int) -> int | None:
    if genus == GENUS3:
        if D <= 16 or D % 8 not in (0, 1, 4):
            return None
        return P_EXCEPTIONS_G3.get(D, 1)
    if D < 12:
        return None
    if D in P_EXCEPTIONS_G4:
        return P_EXCEPTIONS_G4[D]
    if D in (12, 16):
        return 1
    return 2 if D % 2 == 0 else 1


def predicted_q_count(D: int) -> int | None:
    if D <= 16 or D % 8 not in (0, 1, 4):
        return None
    if D in Q_EXCEPTIONS_G3:
        return Q_EXCEPTIONS_G3[D]
    return 2 if D % 2 else 1


# -- reports -----------------------------------------------------------------


@dataclass
class ClassificationReport:
    disc: int
    genus: int
    sizes: dict[str, int] = field(default_factory=dict)
    components: dict[str, int] = field(default_factory=dict)
    predicted: dict[str, int | None] = field(default_factory=dict)
    representatives: dict[str, list[list[int]]] = field(default_factory=dict)
    s_partition: list[list[int]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.flags

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _check(report: ClassificationReport, name: str, got: int, want: int | None) -> None:
    report.predicted[name] = want
    if want is not None and got != want:
        report.flags.append(f"{name}: computed {got} components, predicted {want}")


def verify_classification(D: int, genus: int = GENUS3) -> ClassificationReport:
    """Compute every component count for ``D`` and compare with the stated classification."""
    rep = ClassificationReport(D, genus)

    sg = build_graph(D, genus, SET_S)
    s_parts = sorted(sorted(n[0] for n in c) for c in sg.component_nodes())
    rep.sizes["S"] = len(sg.nodes)
    rep.components["S"] = len(s_parts)
    rep.s_partition = s_parts
    rep.representatives["S"] = [[p[0]] for p in s_parts]
    _check(rep, "S", len(s_parts), predicted_s_count(D, genus))
    want_parts = predicted_s_partition(D, genus, [n[0] for n in sg.nodes])
    if want_parts is not None and sorted(want_parts) != s_parts:
        rep.flags.append(f"S: partition {s_parts} differs from predicted {sorted(want_parts)}")

    pg = build_graph(D, genus, SET_P)
    p_comps = pg.component_nodes()
    rep.sizes["P"] = len(pg.nodes)
    rep.components["P"] = len(p_comps)
    rep.representatives["P"] = [list(c[0]) for c in p_comps]
    _check(rep, "P", len(p_comps), predicted_p_count(D, genus))

    # every component holds a reduced prototype
    for comp in p_comps:
        if not any(n[1] == 1 and n[2] == 0 for n in comp):
            rep.flags.append(f"P: component of {comp[0]} has no reduced prototype")

    # reduced-set relation refines the prototype relation
    where = {}
    for k, comp in enumerate(p_comps):
        for n in comp:
            where[n] = k
    k_scale = 8 if genus == GENUS3 else 4
    for part in s_parts:
        ks = {where.get(((D - e * e) // k_scale, 1, 0, e)) for e in part}
        ks.discard(None)
        if len(ks) > 1:
            rep.flags.append(f"S component {part} meets {len(ks)} prototype components")

    if genus == GENUS4 and D % 2 == 0:
        for comp in p_comps:
            if len({n[3] % 4 for n in comp}) > 1:
                rep.flags.append(f"P: e mod 4 not constant on component of {comp[0]}")

    if genus == GENUS3:
        rep.sizes["Pp"] = len(enumerate_tuples(D, GENUS3, "B"))
        qg = build_graph(D, GENUS3, SET_Q)
        q_comps = qg.component_nodes()
        rep.sizes["Q"] = len(qg.nodes)
        rep.components["Q"] = len(q_comps)
        rep.representatives["Q"] = [list(c[0]) for c in q_comps]
        _check(rep, "Q", len(q_comps), predicted_q_count(D))
        parity = q_components_via_parity(D, pg)
        if parity != len(q_comps):
            rep.flags.append(f"Q: parity rule gives {parity}, graph gives {len(q_comps)}")
        if D % 16 == 4 and D not in S_EXCEPTIONS_G3:
            for part in s_parts:
                if len({e % 8 for e in part}) > 1:
                    rep.flags.append(f"S: e mod 8 not constant on {part}")
    return rep


def admissible_discs(lo: int, hi: int, genus: int = GENUS3) -> list[int]:
    """Discriminants in ``[lo, hi]`` covered by the classification statements."""
    if genus == GENUS3:
        return [D for D in range(max(lo, 17), hi + 1) if D % 8 in (0, 1, 4)]
    return [D for D in range(max(lo, 12), hi + 1) if is_discriminant(D)]


def sweep(discs: Iterable[int], genus: int = GENUS3, jobs: int = 1) -> list[ClassificationReport]:
    """Reports for each discriminant, in input order regardless of ``jobs``."""
    discs = list(discs)
    if jobs <= 1:
        return [verify_classification(D, genus) for D in discs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(verify_classification, discs, [genus] * len(discs), chunksize=16))


def component_summary(D: int, genus: int, kind: str) -> dict:
    g = build_graph(D, genus, kind)
    comps = g.component_nodes()
    return {
        "disc": D,
        "genus": genus,
        "set": kind,
        "size": len(g.nodes),
        "components": len(comps),
        "classes": [[list(n) for n in c] for c in comps],
    }


# -- serialization -----------------------------------------------------------

REPORT_COLUMNS = ["D", "genus", "S", "S_components", "P", "P_components", "Q", "Q_components", "ok", "flags"]


def reports_to_csv(reports: Sequence[ClassificationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in reports:
        writer.writerow([
            r.disc, r.genus,
            r.sizes.get("S", ""), r.components.get("S", ""),
            r.sizes.get("P", ""), r.components.get("P", ""),
            r.sizes.get("Q", ""), r.components.get("Q", ""),
            int(r.ok), "; ".join(r.flags),
        ])
    return buf.getvalue()


def reports_to_json(reports: Sequence[ClassificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1) + "\n"


def node_key(node: Hashable) -> str:
    return ",".join(map(str, node))


def set_summary(D: int, genus: int, kind: str) -> dict:
    """Size and component count of one node set, with the ``e`` partition for ``S`` and the parity count for ``Q``."""
    g = build_graph(D, genus, kind)
    comps = g.component_nodes()
    out = {"disc": D, "genus": genus, "set": kind, "size": len(g.nodes), "components": len(comps)}
    if kind == SET_S:
        out["partition"] = sorted(sorted(n[0] for n in c) for c in comps)
    elif kind == SET_Q:
        out["parity_components"] = q_components_via_parity(D)
    return out


def summary_flags(summary: dict) -> tuple[int | None, list[str]]:
    """Predicted component count for a `set_summary` result and the list of disagreements."""
    D, genus, kind = summary["disc"], summary["genus"], summary["set"]
    got = summary["components"]
    if kind == SET_S:
        want = predicted_s_count(D, genus)
    elif kind == SET_P:
        want = predicted_p_count(D, genus)
    else:
        want = predicted_q_count(D)
    flags = []
    if want is not None and got != want:
        flags.append(f"{kind}: computed {got} components, predicted {want}")
    if kind == SET_S:
        values = [e for part in summary["partition"] for e in part]
        parts = predicted_s_partition(D, genus, values)
        if parts is not None and sorted(parts) != summary["partition"]:
            flags.append(f"S: partition {summary['partition']} differs from predicted {sorted(parts)}")
    if kind == SET_Q and summary["parity_components"] != got:
        flags.append(f"Q: parity rule gives {summary['parity_components']}, graph gives {got}")
    return want, flags
