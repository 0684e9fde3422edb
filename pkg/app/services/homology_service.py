"""
Linking numbers, homology classes in the handlebody exterior (as linking
vectors against the spine loops) and the delta intersection condition.
"""
import logging
from typing import Iterable, Mapping, Sequence

import numpy as np

from app.models.diagram import LinkDiagram
from app.models.homology import HomologyClass, IntersectionMatrix, LinkingTable
from app.models.surgery import Strand
from app.utils.errors import ComponentError

logger = logging.getLogger(__name__)


def _check_component(d: LinkDiagram, k: int):
    if not 1 <= k <= len(d.components):
        raise ComponentError(f"unknown component {k}")


def linking_number(d: LinkDiagram, a: int, b: int) -> int:
    """Half the signed count of crossings between components a and b."""
    _check_component(d, a)
    _check_component(d, b)
    if a == b:
        raise ComponentError("linking number needs two distinct components")
    total = sum(
        x.sign for x in d.crossings
        if set(d.crossing_components(x)) == {a, b}
    )
    assert total % 2 == 0, f"odd signed crossing count {total}"
    return total // 2


def linking_table(d: LinkDiagram) -> LinkingTable:
    n = len(d.components)
    matrix = np.zeros((n, n), dtype=int)
    for x in d.crossings:
        over, under = d.crossing_components(x)
        if over != under:
            matrix[over - 1, under - 1] += x.sign
            matrix[under - 1, over - 1] += x.sign
    matrix //= 2
    return LinkingTable(matrix=tuple(tuple(int(v) for v in row) for row in matrix))


# ------------------------------------------------------------------
# Classes in Z^g
# ------------------------------------------------------------------
def _class_of(record: Mapping[int, int], genus: int) -> HomologyClass:
    coords = []
    for i in range(1, genus + 1):
        if i not in record:
            raise ComponentError(f"missing linking data against loop {i}")
        coords.append(int(record[i]))
    return HomologyClass(coords=tuple(coords))


def component_classes(records: Sequence[Mapping[int, int]], genus: int) -> list:
    """Per-component classes; each record maps loop index to linking number."""
    return [_class_of(record, genus) for record in records]


def homology_class(records: Sequence[Mapping[int, int]], genus: int) -> HomologyClass:
    """Class of the whole link: coordinate i is the sum over components of lk(L_k, l_i)."""
    total = HomologyClass.zero(genus)
    for cls in component_classes(records, genus):
        total = total + cls
    return total


def is_null_homologous(records: Sequence[Mapping[int, int]], genus: int) -> bool:
    return homology_class(records, genus).is_zero


def is_completely_null_homologous(records: Sequence[Mapping[int, int]], genus: int) -> bool:
    return all(cls.is_zero for cls in component_classes(records, genus))


def link_records(d: LinkDiagram, loops: Sequence[int]) -> list:
    """
    Linking records of every non-loop component of d against the listed
    loop components (loop i of the spine is component loops[i-1] of d).
    """
    for k in loops:
        _check_component(d, k)
    return [
        {i: linking_number(d, k, loop) for i, loop in enumerate(loops, start=1)}
        for k in range(1, len(d.components) + 1)
        if k not in loops
    ]


def class_from_strands(strands: Iterable[Strand], genus: int) -> HomologyClass:
    """A small circle around strands links loop i once per strand, signed by direction."""
    coords = np.zeros(genus, dtype=int)
    for strand in strands:
        if not 1 <= strand.loop <= genus:
            raise ComponentError(f"strand on unknown loop {strand.loop}")
        coords[strand.loop - 1] += strand.orientation
    return HomologyClass(coords=tuple(int(c) for c in coords))


def strand_record(strands: Iterable[Strand], genus: int) -> dict:
    cls = class_from_strands(strands, genus)
    return {i: c for i, c in enumerate(cls.coords, start=1)}


# ------------------------------------------------------------------
# Delta condition
# ------------------------------------------------------------------
def intersection_delta(meridians: Sequence[str], duals: Sequence[str],
                       crossings: Iterable[tuple]) -> IntersectionMatrix:
    """
    Count recorded crossings (i, j) of C_i with C_j'' (1-based) into a
    g x g matrix; it passes when it is the identity.
    """
    g = len(meridians)
    if len(duals) != g:
        raise ComponentError(f"{g} meridians but {len(duals)} dual curves")
    matrix = np.zeros((g, g), dtype=int)
    for i, j in crossings:
        if not (1 <= i <= g and 1 <= j <= g):
            raise ComponentError(f"curve index ({i}, {j}) out of range for g={g}")
        matrix[i - 1, j - 1] += 1
    result = IntersectionMatrix(entries=tuple(tuple(int(v) for v in row) for row in matrix))
    logger.debug("Intersection matrix %s", result.entries)
    return result
