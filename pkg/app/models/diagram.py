"""
Planar diagram models for handlecert: crossings, oriented links and
g-handcuff spines, their signed Gauss codes, and validation reports.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from app.utils.config import SLOT_NAMES, DEFAULT_ARC_SIDE

# (crossing id, True when the strand passes over)
Pass = tuple[int, bool]


@dataclass(frozen=True)
class Edge:
    """One oriented edge of a diagram and the component that carries it."""
    id: int
    component: str


@dataclass(frozen=True)
class Crossing:
    """
    A crossing in PD form.

    slots are the four incident edges counterclockwise, starting at the
    incoming under-edge. over names the slot ('b' or 'd') where the
    over-strand enters.
    """
    id: int
    slots: tuple[int, int, int, int]
    over: str = 'd'

    @property
    def sign(self) -> int:
        return 1 if self.over == 'd' else -1

    @property
    def over_in_slot(self) -> int:
        return SLOT_NAMES.index(self.over)

    @property
    def over_out_slot(self) -> int:
        return (self.over_in_slot + 2) % 4

    @property
    def under_in(self) -> int:
        return self.slots[0]

    @property
    def under_out(self) -> int:
        return self.slots[2]

    @property
    def over_in(self) -> int:
        return self.slots[self.over_in_slot]

    @property
    def over_out(self) -> int:
        return self.slots[self.over_out_slot]

    def is_head_slot(self, slot: int) -> bool:
        """True when the edge in this slot arrives at the crossing."""
        return slot == 0 or slot == self.over_in_slot

    def to_line(self) -> str:
        a, b, c, d = self.slots
        return f"X {self.id} {a} {b} {c} {d} over={self.over}"


@dataclass(frozen=True)
class GaussCode:
    """
    Signed extended Gauss code.

    components are closed strands (link components or spine loops, the
    latter read from their attachment vertex); arcs are open strands read
    from the wedge. signs holds (crossing id, sign) pairs sorted by id.
    """
    components: tuple[tuple[Pass, ...], ...]
    signs: tuple[tuple[int, int], ...]
    arcs: tuple[tuple[Pass, ...], ...] = ()

    @cached_property
    def sign_map(self) -> dict:
        return dict(self.signs)

    @property
    def crossing_ids(self) -> list:
        return [cid for cid, _ in self.signs]


def _edge_owner(groups) -> dict:
    owner = {}
    for label, edges in groups:
        for e in edges:
            owner.setdefault(e, label)
    return owner


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented link diagram: cyclic edge sequences plus crossings."""
    components: tuple[tuple[int, ...], ...]
    crossings: tuple[Crossing, ...] = ()
    # component count from the file header; None for derived diagrams
    declared: Optional[int] = field(default=None, compare=False)

    kind = 'link'

    @cached_property
    def crossing_map(self) -> dict:
        return {x.id: x for x in self.crossings}

    @cached_property
    def component_of_edge(self) -> dict:
        return _edge_owner((k, comp) for k, comp in enumerate(self.components, start=1))

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def crossing(self, crossing_id: int) -> Optional[Crossing]:
        return self.crossing_map.get(crossing_id)

    def edges(self) -> list:
        return [
            Edge(id=e, component=f"component {k}")
            for k, comp in enumerate(self.components, start=1)
            for e in comp
        ]

    def crossing_components(self, crossing: Crossing) -> tuple:
        """(over component, under component), 1-based."""
        owner = self.component_of_edge
        return owner.get(crossing.over_in), owner.get(crossing.under_in)


@dataclass(frozen=True)
class SpineDiagram:
    """
    A g-handcuff spine: g loops, g arcs from the wedge x to the attachment
    vertex v_i on loop i, and the crossings among them.
    """
    genus: int
    loops: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, ...], ...]
    wedge: tuple[int, ...]
    crossings: tuple[Crossing, ...] = ()
    sides: tuple[str, ...] = ()

    kind = 'spine'

    def __post_init__(self):
        if not self.sides:
            object.__setattr__(self, 'sides', (DEFAULT_ARC_SIDE,) * len(self.arcs))

    @cached_property
    def crossing_map(self) -> dict:
        return {x.id: x for x in self.crossings}

    @cached_property
    def loop_of_edge(self) -> dict:
        return _edge_owner((i, loop) for i, loop in enumerate(self.loops, start=1))

    @cached_property
    def arc_of_edge(self) -> dict:
        return _edge_owner((i, arc) for i, arc in enumerate(self.arcs, start=1))

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def crossing(self, crossing_id: int) -> Optional[Crossing]:
        return self.crossing_map.get(crossing_id)

    def edges(self) -> list:
        found = [Edge(id=e, component=f"loop {i}") for i, loop in enumerate(self.loops, start=1) for e in loop]
        found += [Edge(id=e, component=f"arc {i}") for i, arc in enumerate(self.arcs, start=1) for e in arc]
        return found

    @property
    def arc_crossings(self) -> list:
        """Crossings with at least one arc edge, in id order."""
        arc_edges = self.arc_of_edge
        return sorted(
            (x for x in self.crossings if any(e in arc_edges for e in x.slots)),
            key=lambda x: x.id,
        )

    @property
    def normal_form(self) -> bool:
        """x and the arcs carry no crossing."""
        return not self.arc_crossings

    def strand_of_edge(self, edge: int) -> Optional[tuple]:
        """('loop', i) or ('arc', i) for an edge, None when unknown."""
        if edge in self.loop_of_edge:
            return ('loop', self.loop_of_edge[edge])
        if edge in self.arc_of_edge:
            return ('arc', self.arc_of_edge[edge])
        return None


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str

    def to_line(self) -> str:
        return f"validation: error {self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    """Every violated invariant of a diagram; empty means a consistent planar code."""
    issues: tuple[ValidationIssue, ...] = ()
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    pieces: int = 0

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def euler(self) -> int:
        return self.vertices - self.edges + self.faces

    def lines(self) -> list:
        if self.ok:
            return [f"validation: ok V={self.vertices} E={self.edges} F={self.faces}"]
        return [issue.to_line() for issue in self.issues]


@dataclass(frozen=True)
class Face:
    """A face of the plane graph as its cycle of darts (edge, direction)."""
    darts: tuple[tuple[int, int], ...] = field(default=())

    @property
    def edge_ids(self) -> list:
        return [e for e, _ in self.darts]

    def __len__(self) -> int:
        return len(self.darts)
