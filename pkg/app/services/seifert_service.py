"""
Seifert's algorithm on oriented link diagrams and the per-loop surface
system of a handcuff spine.
"""
import logging
from typing import Optional, Sequence

from app.models.diagram import LinkDiagram, SpineDiagram
from app.models.surface import (
    SeifertCircleSet,
    SeifertSystemData,
    SpanningSurface,
    SpanningSystemSummary,
    SurfaceData,
)
from app.services import diagram_service
from app.utils.config import ERROR_MESSAGES
from app.utils.errors import ComponentError, NormalFormError

logger = logging.getLogger(__name__)


def orient(d: LinkDiagram, orientations: Optional[Sequence[int]] = None) -> LinkDiagram:
    """Apply per-component orientations (+1 keeps the listed order, -1 reverses)."""
    if orientations is None:
        return d
    if len(orientations) != len(d.components):
        raise ComponentError(
            f"expected {len(d.components)} orientations, got {len(orientations)}")
    for k, value in enumerate(orientations, start=1):
        if value not in (1, -1):
            raise ComponentError(f"component {k} is unoriented")
    for k, value in enumerate(orientations, start=1):
        if value == -1:
            d = diagram_service.reverse_component(d, k)
    return d


def _smoothing(d: LinkDiagram) -> dict:
    """Successor of every edge once each crossing is smoothed along the orientations."""
    nxt = {}
    for crossing in d.crossings:
        nxt[crossing.under_in] = crossing.over_out
        nxt[crossing.over_in] = crossing.under_out
    for comp in d.components:
        for e in comp:
            nxt.setdefault(e, e)
    return nxt


def seifert_circles(d: LinkDiagram, orientations: Optional[Sequence[int]] = None) -> SeifertCircleSet:
    d = orient(d, orientations)
    nxt = _smoothing(d)
    seen = set()
    circles = []
    for start in sorted(nxt):
        if start in seen:
            continue
        circle = []
        e = start
        while e not in seen:
            seen.add(e)
            circle.append(e)
            e = nxt[e]
        circles.append(tuple(circle))
    return SeifertCircleSet(circles=tuple(circles))


def build_surface(d: LinkDiagram, circles: SeifertCircleSet) -> SurfaceData:
    """
    Disk-band surface of the circle set. Genus is summed over the connected
    pieces of the surface, each piece using genus = (2 - chi - b) / 2.
    """
    edges = {e for comp in d.components for e in comp}
    circle_edges = {e for circle in circles.circles for e in circle}
    if edges != circle_edges:
        raise ComponentError("circle set was not produced from this diagram")

    owner = circles.circle_of_edge()
    parent = list(range(circles.count))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for crossing in d.crossings:
        parent[find(owner[crossing.under_in])] = find(owner[crossing.over_in])

    comp_of_edge = d.component_of_edge
    pieces: dict = {}
    for index in range(circles.count):
        pieces.setdefault(find(index), {'disks': 0, 'bands': 0, 'boundary': set()})
        piece = pieces[find(index)]
        piece['disks'] += 1
        piece['boundary'].update(comp_of_edge[e] for e in circles.circles[index])
    for crossing in d.crossings:
        pieces[find(owner[crossing.under_in])]['bands'] += 1

    genus = 0
    for piece in pieces.values():
        twice = 2 - (piece['disks'] - piece['bands']) - len(piece['boundary'])
        assert twice >= 0 and twice % 2 == 0, f"surface piece has 2g = {twice}"
        genus += twice // 2

    return SurfaceData(
        disks=circles.count,
        bands=tuple(sorted((x.id, x.sign) for x in d.crossings)),
        boundary=len(d.components),
        genus=genus,
        pieces=len(pieces),
    )


def surface_of(d: LinkDiagram, orientations: Optional[Sequence[int]] = None) -> SurfaceData:
    oriented = orient(d, orientations)
    return build_surface(oriented, seifert_circles(oriented))


def spine_seifert_system(sp: SpineDiagram, orientations: Optional[Sequence[int]] = None) -> SeifertSystemData:
    """
    Surfaces F_i' bounded by the loops. Per-loop surfaces come from the
    loop's own sub-diagram; the shared disks and bands are read off a
    single run over all loops together.
    """
    if not sp.normal_form:
        raise NormalFormError(ERROR_MESSAGES['normal_form'])
    loops = orient(diagram_service.loop_link(sp), orientations)

    surfaces = tuple(
        surface_of(diagram_service.sub_link(loops, [i]))
        for i in range(1, len(loops.components) + 1)
    )

    circles = seifert_circles(loops)
    comp_of_edge = loops.component_of_edge
    shared_disks = tuple(
        index for index, circle in enumerate(circles.circles, start=1)
        if len({comp_of_edge[e] for e in circle}) > 1
    )
    shared_bands = tuple(
        x.id for x in loops.crossings
        if len(set(loops.crossing_components(x))) > 1
    )
    if shared_disks or shared_bands:
        logger.warning("Surface system shares %d disk(s) and %d band(s) between loops.",
                       len(shared_disks), len(shared_bands))
    logger.info("Seifert system: genera %s", [s.genus for s in surfaces])
    return SeifertSystemData(surfaces=surfaces, shared_disks=shared_disks, shared_bands=shared_bands)


def restrict_to_exterior(system: SeifertSystemData, genus: int) -> SpanningSystemSummary:
    """Removing the collar keeps every genus; F_i pairs with the meridian disk D_i."""
    if system.genus != genus:
        raise ComponentError(f"system has {system.genus} surfaces, expected {genus}")
    return SpanningSystemSummary(surfaces=tuple(
        SpanningSurface(index=i, genus=surface.genus)
        for i, surface in enumerate(system.surfaces, start=1)
    ))
