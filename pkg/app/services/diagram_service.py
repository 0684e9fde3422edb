"""
Diagram kernel for handlecert.
Parses, validates and serializes planar diagram codes and converts them
to and from signed Gauss codes, which is where every move is performed.
"""
import logging
import re
from collections import Counter
from typing import Iterable, Optional, Union

from app.models.diagram import (
    Crossing,
    Face,
    GaussCode,
    LinkDiagram,
    SpineDiagram,
    ValidationIssue,
    ValidationReport,
)
from app.utils.config import (
    ARC_SIDES,
    COMMENT_CHAR,
    DEFAULT_ARC_SIDE,
    ERROR_MESSAGES,
    HEADER_LINK,
    HEADER_SPINE,
    OVER_SLOTS,
    SLOT_NAMES,
)
from app.utils.errors import ComponentError, DiagramSemanticError, DiagramSyntaxError, MoveError

logger = logging.getLogger(__name__)

Diagram = Union[LinkDiagram, SpineDiagram]

_HEADER_RE = re.compile(r'^(spine)\s+g=(\S+)$|^(link)\s+n=(\S+)$')


# ------------------------------------------------------------------
# Reading
# ------------------------------------------------------------------
class _Line:
    """One significant line, tokenized with 1-based columns."""

    def __init__(self, number: int, raw: str):
        self.number = number
        body = raw.split(COMMENT_CHAR, 1)[0].rstrip()
        self.text = body.strip()
        self.tokens = [(m.group(0), m.start() + 1) for m in re.finditer(r'\S+', body)]

    def error(self, column: int, message: str) -> DiagramSyntaxError:
        return DiagramSyntaxError(self.number, column, message)


def _positive_int(line: _Line, token: str, column: int, what: str) -> int:
    if not token.isdigit() or int(token) < 1:
        raise line.error(column, f"expected positive integer {what}, got {token!r}")
    return int(token)


def _edge_list(line: _Line, tokens) -> tuple:
    edges = []
    for token, column in tokens:
        edges.append(_positive_int(line, token, column, "edge id"))
    if not edges:
        column = line.tokens[-1][1] + len(line.tokens[-1][0]) if line.tokens else 1
        raise line.error(column, "expected at least one edge id")
    return tuple(edges)


def _indexed(line: _Line, label: str, bound: int) -> tuple:
    """Split '<label> <i>: <rest>' and return (i, remaining tokens)."""
    if len(line.tokens) < 2:
        raise line.error(1, f"expected '{label} <index>:'")
    token, column = line.tokens[1]
    if not token.endswith(':'):
        raise line.error(column, f"expected ':' after {label} index")
    index = _positive_int(line, token[:-1], column, f"{label} index")
    if index > bound:
        raise line.error(column, f"{label} index {index} exceeds declared count {bound}")
    return index, line.tokens[2:]


def _crossing(line: _Line) -> Crossing:
    if len(line.tokens) != 7:
        raise line.error(1, "crossing line needs 'X <id> <a> <b> <c> <d> over=<slot>'")
    cid = _positive_int(line, *line.tokens[1], "crossing id")
    slots = tuple(_positive_int(line, t, c, "edge id") for t, c in line.tokens[2:6])
    token, column = line.tokens[6]
    if not token.startswith('over=') or token[5:] not in SLOT_NAMES:
        raise line.error(column, f"expected over=<a|b|c|d>, got {token!r}")
    return Crossing(id=cid, slots=slots, over=token[5:])


def read_diagram(text: str) -> Diagram:
    """
    Syntax-level reader. Returns the diagram without checking its
    invariants, so that validate() can report every violation.
    """
    lines = [_Line(n, raw) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [line for line in lines if line.text]
    if not lines:
        raise DiagramSyntaxError(1, 1, "empty diagram file")

    head = lines[0]
    match = _HEADER_RE.match(' '.join(t for t, _ in head.tokens))
    if not match:
        raise head.error(1, "expected header 'spine g=<int>' or 'link n=<int>'")
    kind = match.group(1) or match.group(3)
    count_token = match.group(2) or match.group(4)
    count = _positive_int(head, count_token, head.tokens[1][1] + 2, "count")

    strands: dict = {}
    arcs: dict = {}
    sides: dict = {}
    wedge: Optional[tuple] = None
    crossings: dict = {}
    strand_label = 'loop' if kind == HEADER_SPINE else 'component'

    for line in lines[1:]:
        keyword, column = line.tokens[0]
        if keyword == 'X':
            crossing = _crossing(line)
            if crossing.id in crossings:
                raise line.error(line.tokens[1][1], f"duplicate crossing id {crossing.id}")
            crossings[crossing.id] = crossing
        elif keyword == strand_label:
            index, rest = _indexed(line, strand_label, count)
            if index in strands:
                raise line.error(line.tokens[1][1], f"duplicate {strand_label} {index}")
            strands[index] = _edge_list(line, rest)
        elif keyword == 'arc' and kind == HEADER_SPINE:
            index, rest = _indexed(line, 'arc', count)
            if index in arcs:
                raise line.error(line.tokens[1][1], f"duplicate arc {index}")
            side = DEFAULT_ARC_SIDE
            if rest and rest[-1][0].startswith('side='):
                token, side_column = rest[-1]
                side = token[5:]
                if side not in ARC_SIDES:
                    raise line.error(side_column, f"expected side=left|right, got {token!r}")
                rest = rest[:-1]
            arcs[index] = _edge_list(line, rest)
            sides[index] = side
        elif keyword == 'wedge:' and kind == HEADER_SPINE:
            if wedge is not None:
                raise line.error(column, "duplicate wedge line")
            wedge = _edge_list(line, line.tokens[1:])
        else:
            raise line.error(column, f"unexpected keyword {keyword!r} in {kind} file")

    ordered_crossings = tuple(crossings[cid] for cid in sorted(crossings))
    if kind == HEADER_LINK:
        return LinkDiagram(
            components=tuple(strands[i] for i in sorted(strands)),
            crossings=ordered_crossings,
            declared=count,
        )
    arc_order = sorted(arcs)
    return SpineDiagram(
        genus=count,
        loops=tuple(strands[i] for i in sorted(strands)),
        arcs=tuple(arcs[i] for i in arc_order),
        wedge=wedge or (),
        crossings=ordered_crossings,
        sides=tuple(sides[i] for i in arc_order),
    )


def _require_valid(diagram: Diagram) -> Diagram:
    report = validate(diagram)
    if not report.ok:
        logger.info("Diagram rejected: %d issue(s).", len(report.issues))
        raise DiagramSemanticError(report.issues)
    return diagram


def parse_spine(text: str) -> SpineDiagram:
    """Parse and validate a spine file."""
    diagram = read_diagram(text)
    if not isinstance(diagram, SpineDiagram):
        raise DiagramSemanticError([ValidationIssue('kind', ERROR_MESSAGES['not_a_spine'])])
    _require_valid(diagram)
    logger.info("Parsed spine: g=%d, %d crossing(s), normal form=%s",
                diagram.genus, diagram.crossing_count, diagram.normal_form)
    return diagram


def parse_link(text: str) -> LinkDiagram:
    """Parse and validate a link file."""
    diagram = read_diagram(text)
    if not isinstance(diagram, LinkDiagram):
        raise DiagramSemanticError([ValidationIssue('kind', ERROR_MESSAGES['not_a_link'])])
    return _require_valid(diagram)


# ------------------------------------------------------------------
# Writing
# ------------------------------------------------------------------
def _ids(edges: Iterable[int]) -> str:
    return ' '.join(str(e) for e in edges)


def serialize(diagram: Diagram) -> str:
    """Byte-stable text form; crossings are written in id order."""
    out = []
    if isinstance(diagram, SpineDiagram):
        out.append(f"{HEADER_SPINE} g={diagram.genus}")
        for i, loop in enumerate(diagram.loops, start=1):
            out.append(f"loop {i}: {_ids(loop)}")
        for i, (arc, side) in enumerate(zip(diagram.arcs, diagram.sides), start=1):
            suffix = '' if side == DEFAULT_ARC_SIDE else f" side={side}"
            out.append(f"arc {i}: {_ids(arc)}{suffix}")
        out.append(f"wedge: {_ids(diagram.wedge)}")
    else:
        out.append(f"{HEADER_LINK} n={len(diagram.components)}")
        for k, comp in enumerate(diagram.components, start=1):
            out.append(f"component {k}: {_ids(comp)}")
    for crossing in sorted(diagram.crossings, key=lambda x: x.id):
        out.append(crossing.to_line())
    return '\n'.join(out) + '\n'


# ------------------------------------------------------------------
# Incidence structure
# ------------------------------------------------------------------
class _Incidence:
    """
    Edge ends and node rotations of a diagram.

    nodes maps a node key to its counterclockwise list of (edge, end),
    end being 'head' (edge arrives) or 'tail' (edge leaves).
    """

    def __init__(self, diagram: Diagram):
        self.nodes: dict = {}
        self.uses: Counter = Counter()
        self.ends: dict = {}
        self.free: list = []

        for crossing in diagram.crossings:
            rotation = []
            for slot, edge in enumerate(crossing.slots):
                end = 'head' if crossing.is_head_slot(slot) else 'tail'
                rotation.append((edge, end))
            self._add_node(('X', crossing.id), rotation)

        if isinstance(diagram, SpineDiagram):
            for i, loop in enumerate(diagram.loops, start=1):
                arc = diagram.arcs[i - 1] if i - 1 < len(diagram.arcs) else None
                side = diagram.sides[i - 1] if i - 1 < len(diagram.sides) else DEFAULT_ARC_SIDE
                rotation = [(loop[-1], 'head'), (loop[0], 'tail')]
                if arc is not None:
                    arc_end = (arc[-1], 'head')
                    rotation = rotation + [arc_end] if side == 'left' else [rotation[0], arc_end, rotation[1]]
                self._add_node(('v', i), rotation)
            if diagram.wedge:
                self._add_node(('x', 0), [(e, 'tail') for e in diagram.wedge])
        else:
            in_crossing = {e for x in diagram.crossings for e in x.slots}
            for k, comp in enumerate(diagram.components, start=1):
                if len(comp) == 1 and comp[0] not in in_crossing:
                    self.free.append(comp[0])
                    self._add_node(('o', k), [(comp[0], 'head'), (comp[0], 'tail')])

    def _add_node(self, key, rotation):
        self.nodes[key] = rotation
        for slot, (edge, end) in enumerate(rotation):
            self.uses[edge] += 1
            self.ends.setdefault((edge, end), []).append((key, slot))

    def position(self, edge: int, end: str):
        return self.ends[(edge, end)][0]


def _strands(diagram: Diagram) -> list:
    """(label, edges, closed) for every strand of the diagram."""
    if isinstance(diagram, SpineDiagram):
        found = [(f"loop {i}", loop, True) for i, loop in enumerate(diagram.loops, start=1)]
        found += [(f"arc {i}", arc, False) for i, arc in enumerate(diagram.arcs, start=1)]
        return found
    return [(f"component {k}", comp, True) for k, comp in enumerate(diagram.components, start=1)]


def _continues(diagram: Diagram, incoming: int, outgoing: int, inc: _Incidence) -> bool:
    """True when outgoing leaves the node where incoming arrives, on the same strand."""
    (node, slot) = inc.position(incoming, 'head')
    (node2, slot2) = inc.position(outgoing, 'tail')
    if node != node2:
        return False
    if node[0] == 'X':
        return (slot + 2) % 4 == slot2
    return True


# ------------------------------------------------------------------
# Face tracing
# ------------------------------------------------------------------
def _trace(inc: _Incidence) -> list:
    """Faces to the left of each dart; the turn at a node is to the clockwise-next slot."""
    edges = sorted({e for (e, _end) in inc.ends})
    seen = set()
    faces = []
    for start in [(e, d) for e in edges for d in (1, -1)]:
        if start in seen:
            continue
        darts = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            darts.append(dart)
            edge, direction = dart
            node, slot = inc.position(edge, 'head' if direction == 1 else 'tail')
            rotation = inc.nodes[node]
            next_edge, next_end = rotation[(slot - 1) % len(rotation)]
            dart = (next_edge, 1 if next_end == 'tail' else -1)
        faces.append(Face(darts=tuple(darts)))
    return faces


def _pieces(inc: _Incidence) -> list:
    """Connected pieces of the projection as (node set, edge set)."""
    parent = {node: node for node in inc.nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    edge_nodes = {}
    for (edge, _end), positions in inc.ends.items():
        for node, _slot in positions:
            edge_nodes.setdefault(edge, []).append(node)
    for edge, nodes in edge_nodes.items():
        for other in nodes[1:]:
            parent[find(other)] = find(nodes[0])

    groups: dict = {}
    for node in inc.nodes:
        groups.setdefault(find(node), set()).add(node)
    result = []
    for nodes in groups.values():
        edges = {e for e, ns in edge_nodes.items() if ns[0] in nodes}
        result.append((nodes, edges))
    return result


def trace_faces(diagram: Diagram) -> list:
    """Faces of a diagram that passes validation."""
    _require_valid(diagram)
    return _trace(_Incidence(diagram))


def connected_pieces(diagram: Diagram) -> list:
    """Edge sets of the connected pieces of the projection."""
    return [edges for _nodes, edges in _pieces(_Incidence(diagram))]


def dart_faces(diagram: Diagram) -> dict:
    """Map each dart (edge, ±1) to the index of the face on its left."""
    owner = {}
    for index, face in enumerate(trace_faces(diagram)):
        for dart in face.darts:
            owner[dart] = index
    return owner


# ------------------------------------------------------------------
# Validation
# ------------------------------------------------------------------
def validate(diagram: Diagram) -> ValidationReport:
    """List every violated invariant; never raises."""
    issues: list = []

    if isinstance(diagram, SpineDiagram):
        if len(diagram.loops) != diagram.genus:
            issues.append(ValidationIssue(
                'loop-count', f"expected {diagram.genus} loops, found {len(diagram.loops)}"))
        if len(diagram.arcs) != diagram.genus:
            issues.append(ValidationIssue(
                'arc-count', f"expected {diagram.genus} arcs, found {len(diagram.arcs)}"))
        arc_starts = [arc[0] for arc in diagram.arcs]
        if sorted(diagram.wedge) != sorted(arc_starts):
            issues.append(ValidationIssue(
                'wedge', "wedge must list exactly the first edge of every arc"))
    elif diagram.declared is not None and len(diagram.components) != diagram.declared:
        issues.append(ValidationIssue(
            'component-count', f"expected {diagram.declared} components, found {len(diagram.components)}"))

    for crossing in diagram.crossings:
        if crossing.over not in OVER_SLOTS:
            issues.append(ValidationIssue(
                'over-slot', f"crossing {crossing.id}: over-strand cannot enter on slot {crossing.over}"))

    membership = Counter(e for _label, edges, _closed in _strands(diagram) for e in edges)
    for edge, count in sorted(membership.items()):
        if count > 1:
            issues.append(ValidationIssue(
                'edge-component', f"edge {edge} listed {count} times across components"))

    inc = _Incidence(diagram)
    for edge in sorted(set(inc.uses) | set(membership)):
        used = inc.uses.get(edge, 0)
        if used != 2:
            issues.append(ValidationIssue('edge-use', f"edge {edge} used {used} times"))
        elif len(inc.ends.get((edge, 'head'), [])) != 1:
            issues.append(ValidationIssue(
                'edge-orientation', f"edge {edge} needs one arriving and one leaving end"))
        if edge not in membership:
            issues.append(ValidationIssue('edge-component', f"edge {edge} belongs to no component"))

    if issues:
        return ValidationReport(issues=tuple(issues))

    for label, edges, closed in _strands(diagram):
        pairs = list(zip(edges, edges[1:]))
        if closed and isinstance(diagram, LinkDiagram):
            pairs.append((edges[-1], edges[0]))
        for incoming, outgoing in pairs:
            if not _continues(diagram, incoming, outgoing, inc):
                issues.append(ValidationIssue(
                    'continuity', f"{label}: edge {outgoing} does not continue edge {incoming}"))
    if issues:
        return ValidationReport(issues=tuple(issues))

    faces = _trace(inc)
    face_edges = [{e for e, _d in face.darts} for face in faces]
    for nodes, edges in _pieces(inc):
        piece_faces = sum(1 for fe in face_edges if fe & edges)
        euler = len(nodes) - len(edges) + piece_faces
        if euler != 2:
            issues.append(ValidationIssue(
                'nonplanar',
                f"V - E + F = {len(nodes)} - {len(edges)} + {piece_faces} = {euler}, expected 2"))

    edge_count = len({e for (e, _end) in inc.ends})
    return ValidationReport(
        issues=tuple(issues),
        vertices=len(inc.nodes),
        edges=edge_count,
        faces=len(faces),
        pieces=len(_pieces(inc)),
    )


# ------------------------------------------------------------------
# Gauss codes
# ------------------------------------------------------------------
def _passes(diagram: Diagram, edges: tuple, stop_at_vertex: bool) -> tuple:
    heads = {}
    for crossing in diagram.crossings:
        heads[crossing.under_in] = (crossing.id, False)
        heads[crossing.over_in] = (crossing.id, True)
    body = edges[:-1] if stop_at_vertex else edges
    return tuple(heads[e] for e in body if e in heads)


def gauss_code(diagram: Diagram) -> GaussCode:
    """Signed Gauss code of a valid diagram."""
    signs = tuple(sorted((x.id, x.sign) for x in diagram.crossings))
    if isinstance(diagram, SpineDiagram):
        return GaussCode(
            components=tuple(_passes(diagram, loop, True) for loop in diagram.loops),
            signs=signs,
            arcs=tuple(_passes(diagram, arc, True) for arc in diagram.arcs),
        )
    return GaussCode(
        components=tuple(_passes(diagram, comp, False) for comp in diagram.components),
        signs=signs,
    )


def _build_crossings(code: GaussCode, roles: dict) -> tuple:
    crossings = []
    for cid, sign in code.signs:
        role = roles.get(cid, {})
        if set(role) != {True, False}:
            raise MoveError(f"crossing {cid} needs exactly one over and one under pass")
        u_in, u_out = role[False]
        o_in, o_out = role[True]
        if sign > 0:
            crossings.append(Crossing(id=cid, slots=(u_in, o_out, u_out, o_in), over='d'))
        else:
            crossings.append(Crossing(id=cid, slots=(u_in, o_in, u_out, o_out), over='b'))
    return tuple(crossings)


def _record(roles: dict, passes: tuple, arriving: list, leaving: list):
    for j, (cid, over) in enumerate(passes):
        slot = roles.setdefault(cid, {})
        if over in slot:
            raise MoveError(f"crossing {cid} passed twice as {'over' if over else 'under'}")
        slot[over] = (arriving[j], leaving[j])


def link_from_gauss(code: GaussCode) -> LinkDiagram:
    """PD form of a link Gauss code, edges numbered in component order."""
    counter = 1
    components = []
    roles: dict = {}
    for passes in code.components:
        n = len(passes)
        if n == 0:
            components.append((counter,))
            counter += 1
            continue
        ids = list(range(counter, counter + n))
        counter += n
        _record(roles, passes, ids, ids[1:] + ids[:1])
        components.append(tuple(ids))
    return LinkDiagram(components=tuple(components), crossings=_build_crossings(code, roles))


def spine_from_gauss(code: GaussCode, sides: Optional[tuple] = None,
                     wedge_order: Optional[tuple] = None) -> SpineDiagram:
    """
    PD form of a spine Gauss code; loops first, then arcs. wedge_order
    lists arc indices counterclockwise around x (default 1..g).
    """
    counter = 1
    roles: dict = {}
    loops, arcs = [], []
    for group, target in ((code.components, loops), (code.arcs, arcs)):
        for passes in group:
            ids = list(range(counter, counter + len(passes) + 1))
            counter += len(ids)
            _record(roles, passes, ids[:-1], ids[1:])
            target.append(tuple(ids))
    return SpineDiagram(
        genus=len(loops),
        loops=tuple(loops),
        arcs=tuple(arcs),
        wedge=tuple(arcs[i - 1][0] for i in (wedge_order or range(1, len(arcs) + 1))),
        crossings=_build_crossings(code, roles),
        sides=tuple(sides) if sides else (DEFAULT_ARC_SIDE,) * len(arcs),
    )


def standard_spine(genus: int) -> SpineDiagram:
    """Crossingless spine: loops in a row, each joined to x by a plain arc."""
    code = GaussCode(components=((),) * genus, signs=(), arcs=((),) * genus)
    return spine_from_gauss(code)


def drop_crossings(code: GaussCode, crossing_ids) -> GaussCode:
    """Remove every pass of the given crossings."""
    gone = set(crossing_ids)
    return GaussCode(
        components=tuple(tuple(p for p in comp if p[0] not in gone) for comp in code.components),
        signs=tuple((cid, s) for cid, s in code.signs if cid not in gone),
        arcs=tuple(tuple(p for p in arc if p[0] not in gone) for arc in code.arcs),
    )


def flip_crossings(code: GaussCode, crossing_ids) -> GaussCode:
    """Crossing changes: swap over/under and negate the sign."""
    flipped = set(crossing_ids)

    def swap(passes):
        return tuple((cid, (not over) if cid in flipped else over) for cid, over in passes)

    return GaussCode(
        components=tuple(swap(comp) for comp in code.components),
        signs=tuple((cid, -s if cid in flipped else s) for cid, s in code.signs),
        arcs=tuple(swap(arc) for arc in code.arcs),
    )


def loop_link(spine: SpineDiagram) -> LinkDiagram:
    """The loops l_1..l_g as a link diagram; arcs and their crossings are dropped."""
    code = gauss_code(spine)
    arc_crossings = {cid for arc in code.arcs for cid, _ in arc}
    trimmed = drop_crossings(code, arc_crossings)
    return link_from_gauss(GaussCode(components=trimmed.components, signs=trimmed.signs))


def sub_link(diagram: LinkDiagram, keep) -> LinkDiagram:
    """The sub-diagram made of the listed components (1-based), in that order."""
    code = gauss_code(diagram)
    indices = list(keep)
    for k in indices:
        if not 1 <= k <= len(code.components):
            raise ComponentError(f"unknown component {k}")
    kept = [code.components[k - 1] for k in indices]
    passes = Counter(cid for comp in kept for cid, _ in comp)
    lost = [cid for cid in code.crossing_ids if passes[cid] != 2]
    trimmed = drop_crossings(GaussCode(components=tuple(kept), signs=code.signs), lost)
    return link_from_gauss(trimmed)


def reverse_component(diagram: LinkDiagram, component: int) -> LinkDiagram:
    """Reverse one component; mixed crossings change sign, self-crossings keep theirs."""
    code = gauss_code(diagram)
    if not 1 <= component <= len(code.components):
        raise ComponentError(f"unknown component {component}")
    target = code.components[component - 1]
    mine = Counter(cid for cid, _ in target)
    comps = list(code.components)
    comps[component - 1] = tuple(reversed(target))
    signs = tuple((cid, -s if mine[cid] == 1 else s) for cid, s in code.signs)
    return link_from_gauss(GaussCode(components=tuple(comps), signs=signs))


def writhe(diagram: LinkDiagram, component: int) -> int:
    """Sum of the signs of the component's self-crossings."""
    if not 1 <= component <= len(diagram.components):
        raise ComponentError(f"unknown component {component}")
    total = 0
    for crossing in diagram.crossings:
        over, under = diagram.crossing_components(crossing)
        if over == under == component:
            total += crossing.sign
    return total


def wedge_order(spine: SpineDiagram) -> tuple:
    """Arc indices in the counterclockwise order they leave x."""
    return tuple(spine.arc_of_edge[e] for e in spine.wedge)
