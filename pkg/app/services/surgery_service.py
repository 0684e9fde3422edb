"""
Surgery calculus: the working unknotting state, emission of the 1/n
surgery circles realizing band-crossing changes and full twists, and the
blow-down, core-link and tubing checks.
"""
import logging
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from app.models.diagram import GaussCode, SpineDiagram
from app.models.surgery import (
    BlowdownCertificate,
    BlowdownStep,
    CoreLinkData,
    FramedSurgeryLink,
    Strand,
    SurgeryComponent,
    TubedSurface,
    TubedSystemData,
)
from app.services import diagram_service
from app.services.homology_service import class_from_strands
from app.utils.config import ERROR_MESSAGES, KIND_BCC, KIND_TWIST, SURGERY_LONGITUDE
from app.utils.errors import SurgeryError

logger = logging.getLogger(__name__)


class UnknotState:
    """
    Mutable working state of one unknotting run: the current Gauss code,
    the twist ledger (band id -> accumulated full twists) and the surgery
    components emitted so far. Not shared between threads.
    """

    def __init__(self, spine: SpineDiagram):
        self.genus = spine.genus
        self.code: GaussCode = diagram_service.gauss_code(spine)
        self.sides = tuple(spine.sides)
        self.wedge_order = diagram_service.wedge_order(spine)
        self.counters: dict = {}
        self.components: list = []
        # diagram as it stood when release was applied
        self.before_release: Optional[SpineDiagram] = None

    @property
    def spine(self) -> SpineDiagram:
        return diagram_service.spine_from_gauss(self.code, self.sides, self.wedge_order)

    def loop_of_crossing(self) -> dict:
        """crossing id -> list of loop indices of its loop passes."""
        found: dict = {}
        for i, passes in enumerate(self.code.components, start=1):
            for cid, _over in passes:
                found.setdefault(cid, []).append(i)
        return found

    def arc_crossings(self) -> set:
        return {cid for passes in self.code.arcs for cid, _ in passes}

    def band_ids(self) -> list:
        """Loop self-crossings: each is a band of that loop's Seifert surface."""
        return sorted(cid for cid, loops in self.loop_of_crossing().items()
                      if len(loops) == 2 and loops[0] == loops[1])

    def counter_items(self) -> tuple:
        return tuple(sorted(self.counters.items()))

    def link(self, attested: bool = True) -> FramedSurgeryLink:
        return FramedSurgeryLink(components=tuple(self.components), unlinked_attested=attested)

    def replace(self, code: GaussCode, sides: Optional[Sequence[str]] = None,
                wedge_order: Optional[Sequence[int]] = None):
        self.code = code
        if sides is not None:
            self.sides = tuple(sides)
        if wedge_order is not None:
            self.wedge_order = tuple(wedge_order)


def _strand_pair(spine: SpineDiagram, edge_in: int, edge_out: int) -> tuple:
    kind, index = spine.strand_of_edge(edge_in)
    if kind != 'loop':
        raise SurgeryError(ERROR_MESSAGES['normal_form'])
    return Strand(loop=index, edge=edge_in, orientation=1), Strand(loop=index, edge=edge_out, orientation=-1)


def _emit(state: UnknotState, kind: str, site: int, framing: Fraction, strands: tuple) -> SurgeryComponent:
    cls = class_from_strands(strands, state.genus)
    if not cls.is_zero:
        raise SurgeryError(f"surgery circle at {site} links the loops: class {cls}")
    component = SurgeryComponent(
        id=len(state.components) + 1,
        kind=kind,
        framing=framing,
        site=site,
        strands=strands,
        homology=cls,
    )
    state.components.append(component)
    logger.debug("Emitted %s", component.to_line())
    return component


def emit_band_crossing_change(state: UnknotState, crossing: int) -> tuple:
    """Flip a crossing between band strands; the circle around both bands gets framing 1/(-sign)."""
    sign = state.code.sign_map.get(crossing)
    if sign is None:
        raise SurgeryError(f"crossing {crossing} not in diagram")
    if crossing in state.arc_crossings():
        raise SurgeryError(ERROR_MESSAGES['normal_form'])

    spine = state.spine
    x = spine.crossing(crossing)
    strands = _strand_pair(spine, x.over_in, x.over_out) + _strand_pair(spine, x.under_in, x.under_out)

    loops = state.loop_of_crossing()[crossing]
    state.replace(diagram_service.flip_crossings(state.code, [crossing]))
    if loops[0] == loops[1]:
        state.counters[crossing] = state.counters.get(crossing, 0) + sign

    component = _emit(state, KIND_BCC, crossing, Fraction(1, -sign), strands)
    return state, component


def emit_full_twist(state: UnknotState, band: int, n: int) -> tuple:
    """Add n full twists to a band; the circle around it gets framing 1/(-n)."""
    if n == 0:
        raise SurgeryError("full twist count must be nonzero")
    if band not in state.band_ids():
        raise SurgeryError(f"unknown band {band}")

    spine = state.spine
    x = spine.crossing(band)
    strands = _strand_pair(spine, x.under_in, x.under_out)
    state.counters[band] = state.counters.get(band, 0) + n

    component = _emit(state, KIND_TWIST, band, Fraction(1, -n), strands)
    return state, component


# ------------------------------------------------------------------
# Checks
# ------------------------------------------------------------------
def verify_reflexive(link: FramedSurgeryLink) -> BlowdownCertificate:
    """Blow the components down one at a time; each step needs an unknot, a 1/n slope and the unlinked attestation."""
    steps = []
    for index, component in enumerate(link.components, start=1):
        if component.kind not in (KIND_BCC, KIND_TWIST):
            ok, reason = False, ERROR_MESSAGES['knotted_kind']
        elif component.framing == 0 or abs(component.framing.numerator) != 1:
            ok, reason = False, ERROR_MESSAGES['non_unit_slope']
        elif not link.unlinked_attested:
            ok, reason = False, ERROR_MESSAGES['missing_attestation']
        else:
            ok = True
            reason = f"unknotted {component.kind} circle, slope 1/{component.n}, unlinked"
        steps.append(BlowdownStep(index=index, component_id=component.id, ok=ok, reason=reason))
    certificate = BlowdownCertificate(steps=tuple(steps))
    if not certificate.valid:
        logger.warning("Blow-down certificate invalid: %s", certificate.reason)
    return certificate


def surgery_boundaries(link: FramedSurgeryLink) -> dict:
    """
    Curves a*mu + b*lambda that the tubed disks leave on each surgery
    torus, keyed by component id: one per encircled loop, with a the
    algebraic number of that loop's strands through the circle.
    """
    boundaries = {}
    for component in link.components:
        punctures: dict = {}
        for strand in component.strands:
            punctures[strand.loop] = punctures.get(strand.loop, 0) + strand.orientation
        curves = tuple((a, SURGERY_LONGITUDE[1]) for _loop, a in sorted(punctures.items()))
        boundaries[component.id] = curves or (SURGERY_LONGITUDE,)
    return boundaries


def core_link_check(link: FramedSurgeryLink, boundaries: Mapping[int, Sequence[tuple]]) -> CoreLinkData:
    """
    After 1/n filling the core's meridian is the slope curve; it meets a
    boundary curve a*mu + b*lambda in |p*b - q*a| points.
    """
    counts = []
    for component in link.components:
        if component.id not in boundaries:
            raise SurgeryError(f"no boundary record for surgery component {component.id}")
        p, q = component.framing.numerator, component.framing.denominator
        counts.append((component.id, tuple(abs(p * b - q * a) for a, b in boundaries[component.id])))
    return CoreLinkData(counts=tuple(counts))


def tube_counts(link: FramedSurgeryLink, genus: int) -> list:
    """One tube per opposite-oriented pair of punctures that surgery circles make in D_i."""
    strands = [0] * genus
    for component in link.components:
        for strand in component.strands:
            strands[strand.loop - 1] += 1
    return [count // 2 for count in strands]


def tube_system(counts: Iterable[int]) -> TubedSystemData:
    surfaces = []
    for index, tubes in enumerate(counts, start=1):
        if tubes < 0:
            raise SurgeryError(f"negative tube count {tubes} for disk D{index}")
        surfaces.append(TubedSurface(index=index, tubes=tubes))
    return TubedSystemData(surfaces=tuple(surfaces))
