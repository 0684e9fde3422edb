"""
Reidemeister moves on link diagrams, performed on signed Gauss codes and
read back into PD form, plus a bounded search for crossingless diagrams
used as a small-diagram triviality oracle.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import ClassVar, Union

from app.models.diagram import GaussCode, LinkDiagram
from app.services import diagram_service
from app.utils.config import TRIVIAL_SEARCH_MAX_STATES
from app.utils.errors import MoveError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class R1Insert:
    """Kink on an edge; its crossing gets the given sign."""
    edge: int
    sign: int = 1
    move: ClassVar[str] = 'R1'


@dataclass(frozen=True)
class R1Remove:
    crossing: int
    move: ClassVar[str] = 'R1'


@dataclass(frozen=True)
class R2Insert:
    """
    Push the strand of the over dart across the strand of the under dart.
    Darts are (edge, +1|-1); both must border one face, or lie in
    different connected pieces.
    """
    over: tuple[int, int]
    under: tuple[int, int]
    move: ClassVar[str] = 'R2'


@dataclass(frozen=True)
class R2Remove:
    first: int
    second: int
    move: ClassVar[str] = 'R2'


@dataclass(frozen=True)
class R3Triangle:
    """The three edges of a triangular face."""
    edges: tuple[int, int, int]
    move: ClassVar[str] = 'R3'


Site = Union[R1Insert, R1Remove, R2Insert, R2Remove, R3Triangle]


def _positions(d: LinkDiagram) -> dict:
    """edge id -> (component index, index of the pass it arrives at)."""
    return {e: (k, j) for k, comp in enumerate(d.components) for j, e in enumerate(comp)}


def _with_component(code: GaussCode, k: int, passes: list) -> GaussCode:
    comps = list(code.components)
    comps[k] = tuple(passes)
    return GaussCode(components=tuple(comps), signs=code.signs)


def _next_ids(code: GaussCode, count: int) -> list:
    top = max(code.crossing_ids, default=0)
    return [top + i for i in range(1, count + 1)]


def _signs_plus(code: GaussCode, added: dict) -> tuple:
    return tuple(sorted(list(code.signs) + list(added.items())))


# ------------------------------------------------------------------
# Individual moves
# ------------------------------------------------------------------
def _r1_insert(d: LinkDiagram, site: R1Insert) -> LinkDiagram:
    if site.sign not in (1, -1):
        raise MoveError(f"R1 sign must be +1 or -1, got {site.sign}")
    pos = _positions(d)
    if site.edge not in pos:
        raise MoveError(f"edge {site.edge} not in diagram")
    code = diagram_service.gauss_code(d)
    k, j = pos[site.edge]
    (cid,) = _next_ids(code, 1)
    passes = list(code.components[k])
    passes[j:j] = [(cid, False), (cid, True)]
    code = _with_component(code, k, passes)
    return diagram_service.link_from_gauss(
        GaussCode(components=code.components, signs=_signs_plus(code, {cid: site.sign})))


def _r1_remove(d: LinkDiagram, site: R1Remove) -> LinkDiagram:
    code = diagram_service.gauss_code(d)
    for passes in code.components:
        for j in range(len(passes)):
            if passes[j][0] == passes[j - 1][0] == site.crossing:
                return diagram_service.link_from_gauss(
                    diagram_service.drop_crossings(code, [site.crossing]))
    raise MoveError(f"crossing {site.crossing} is not a removable kink")


def _r2_insert(d: LinkDiagram, site: R2Insert) -> LinkDiagram:
    (e, se), (f, sf) = site.over, site.under
    if e == f:
        raise MoveError("R2 needs two different edges")
    if se not in (1, -1) or sf not in (1, -1):
        raise MoveError("dart directions must be +1 or -1")
    pos = _positions(d)
    for edge in (e, f):
        if edge not in pos:
            raise MoveError(f"edge {edge} not in diagram")

    faces = diagram_service.dart_faces(d)
    pieces = diagram_service.connected_pieces(d)
    same_piece = any(e in piece and f in piece for piece in pieces)
    if same_piece and faces[(e, se)] != faces[(f, sf)]:
        raise MoveError(f"darts {site.over} and {site.under} do not share a face")

    code = diagram_service.gauss_code(d)
    p1, p2 = _next_ids(code, 2)
    signs = {p1: se * sf, p2: -se * sf}
    along_e = [(p1, True), (p2, True)] if se == 1 else [(p2, True), (p1, True)]
    along_f = [(p2, False), (p1, False)] if sf == 1 else [(p1, False), (p2, False)]

    inserts = sorted([(pos[e], along_e), (pos[f], along_f)], key=lambda item: item[0], reverse=True)
    for (k, j), new in inserts:
        passes = list(code.components[k])
        passes[j:j] = new
        code = _with_component(code, k, passes)
    return diagram_service.link_from_gauss(
        GaussCode(components=code.components, signs=_signs_plus(code, signs)))


def _consecutive(d: LinkDiagram, code: GaussCode, pair: set, over: bool) -> list:
    """Edges running between the two crossings on a strand that has the given role at both."""
    found = []
    for k, passes in enumerate(code.components):
        n = len(passes)
        for j in range(n):
            a, b = passes[j - 1], passes[j]
            if n >= 2 and {a[0], b[0]} == pair and a[0] != b[0] and a[1] == b[1] == over:
                found.append(d.components[k][j])
    return found


def _r2_remove(d: LinkDiagram, site: R2Remove) -> LinkDiagram:
    pair = {site.first, site.second}
    code = diagram_service.gauss_code(d)
    if len(pair) != 2 or not pair <= set(code.crossing_ids):
        raise MoveError(f"crossings {site.first}, {site.second} not an R2 pair")
    if code.sign_map[site.first] == code.sign_map[site.second]:
        raise MoveError(f"crossings {site.first}, {site.second} have equal signs")

    bigons = [set(face.edge_ids) for face in diagram_service.trace_faces(d) if len(face) == 2]
    for over_edge in _consecutive(d, code, pair, True):
        for under_edge in _consecutive(d, code, pair, False):
            if {over_edge, under_edge} in bigons:
                return diagram_service.link_from_gauss(diagram_service.drop_crossings(code, pair))
    raise MoveError(f"crossings {site.first}, {site.second} do not bound an over-over bigon")


def _r3(d: LinkDiagram, site: R3Triangle) -> LinkDiagram:
    edges = set(site.edges)
    triangle = [face for face in diagram_service.trace_faces(d)
                if len(face) == 3 and set(face.edge_ids) == edges]
    if len(edges) != 3 or not triangle:
        raise MoveError(f"edges {sorted(site.edges)} do not bound a triangular face")

    pos = _positions(d)
    code = diagram_service.gauss_code(d)
    sides = []
    for e in sorted(edges):
        k, j = pos[e]
        passes = code.components[k]
        sides.append((k, j, passes[j - 1], passes[j]))
    corners = {p[0] for _k, _j, tail, head in sides for p in (tail, head)}
    if len(corners) != 3:
        raise MoveError("triangle must have three distinct crossings")
    if not any(tail[1] and head[1] for _k, _j, tail, head in sides):
        raise MoveError(f"triangle {sorted(site.edges)} has no strand over at both crossings")

    comps = [list(c) for c in code.components]
    for k, j, _tail, _head in sides:
        passes = comps[k]
        i = (j - 1) % len(passes)
        passes[i], passes[j] = passes[j], passes[i]
    return diagram_service.link_from_gauss(
        GaussCode(components=tuple(tuple(c) for c in comps), signs=code.signs))


_HANDLERS = {
    R1Insert: _r1_insert,
    R1Remove: _r1_remove,
    R2Insert: _r2_insert,
    R2Remove: _r2_remove,
    R3Triangle: _r3,
}


def apply_reidemeister(d: LinkDiagram, move: str, site: Site) -> LinkDiagram:
    """Apply R1, R2 or R3 at site; raises MoveError when the site does not admit it."""
    handler = _HANDLERS.get(type(site))
    if handler is None or site.move != move:
        raise MoveError(f"site {site!r} does not describe an {move} move")
    moved = handler(d, site)
    logger.debug("%s at %s: %d -> %d crossings", move, site, d.crossing_count, moved.crossing_count)
    return moved


# ------------------------------------------------------------------
# Site enumeration
# ------------------------------------------------------------------
def reducing_sites(d: LinkDiagram) -> list:
    """Every admissible R1/R2 removal and R3 site of d."""
    code = diagram_service.gauss_code(d)
    sites = []
    for passes in code.components:
        for j in range(len(passes)):
            if passes[j][0] == passes[j - 1][0]:
                sites.append(R1Remove(crossing=passes[j][0]))
    faces = diagram_service.trace_faces(d)
    for face in faces:
        if len(face) == 2:
            ends = set()
            for e in face.edge_ids:
                ends.update(x.id for x in d.crossings if e in x.slots)
            if len(ends) == 2:
                first, second = sorted(ends)
                sites.append(R2Remove(first=first, second=second))
        elif len(face) == 3 and len(set(face.edge_ids)) == 3:
            sites.append(R3Triangle(edges=tuple(sorted(face.edge_ids))))

    admissible = []
    for site in dict.fromkeys(sites):
        try:
            apply_reidemeister(d, site.move, site)
        except MoveError:
            continue
        admissible.append(site)
    return admissible


def insertion_sites(d: LinkDiagram) -> list:
    """A sample of R1/R2 insertion sites: every edge for R1, every pair of darts on a common face for R2."""
    sites = [R1Insert(edge=e, sign=s) for comp in d.components for e in comp for s in (1, -1)]
    for face in diagram_service.trace_faces(d):
        for a in face.darts:
            for b in face.darts:
                if a[0] != b[0]:
                    sites.append(R2Insert(over=a, under=b))
    return sites


def search_trivial(d: LinkDiagram, max_states: int = TRIVIAL_SEARCH_MAX_STATES) -> bool:
    """
    Breadth-first search through R1/R2 removals and R3 moves for a
    crossingless diagram. False when the search space is exhausted or the
    state limit is reached.
    """
    start = diagram_service.link_from_gauss(diagram_service.gauss_code(d))
    seen = {diagram_service.serialize(start)}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current.crossing_count == 0:
            return True
        for site in reducing_sites(current):
            moved = apply_reidemeister(current, site.move, site)
            key = diagram_service.serialize(moved)
            if key in seen:
                continue
            if len(seen) >= max_states:
                logger.warning("Trivial-diagram search stopped after %d states.", max_states)
                return False
            seen.add(key)
            queue.append(moved)
    return False
