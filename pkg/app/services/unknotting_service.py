"""
Unknotting pipeline: exchange arc crossings for band crossings, plan the
crossing changes that make the loops descending, emit the surgery link,
release the spine to standard planar form and certify the whole run.
"""
import logging
from typing import Mapping, Optional, Sequence

from app.models.certificate import (
    CertificateBundle,
    DualizeResult,
    Move,
    MoveTranscript,
    StandardFormAttestation,
    UnknotResult,
)
from app.models.diagram import GaussCode, SpineDiagram
from app.models.homology import HomologyClass
from app.models.surface import SeifertSystemData
from app.services import diagram_service, homology_service, seifert_service, surgery_service
from app.services.surgery_service import UnknotState
from app.utils.config import (
    DEFAULT_ARC_SIDE,
    ERROR_MESSAGES,
    KIND_BCC,
    KIND_EXCHANGE,
    KIND_RELEASE,
    KIND_TWIST,
    MODE_PART2,
    PIPELINE_MODES,
)
from app.utils.errors import (
    ComponentError,
    DiagramSemanticError,
    HandlecertError,
    NormalFormError,
    PipelineRefusal,
    ReplayError,
)

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------
# Arc exchange
# ------------------------------------------------------------------
def _locate_other_pass(groups: list, cid: int, skip: tuple) -> tuple:
    for g_idx, passes in enumerate(groups):
        for pos, (other, over) in enumerate(passes):
            if other == cid and (g_idx, pos) != skip:
                return g_idx, pos, over
    raise ComponentError(f"crossing {cid} has a single pass")


def exchange_arc_crossing(state: UnknotState, arc: Optional[int] = None) -> Optional[Move]:
    """
    Slide the crossing nearest to v_i off arc i, across v_i. The other
    strand then crosses the two loop edges at v_i instead. Returns None
    when no arc carries a crossing.
    """
    code = state.code
    g = len(code.components)
    if arc is None:
        arc = next((i for i, passes in enumerate(code.arcs, start=1) if passes), None)
        if arc is None:
            return None
    if not 1 <= arc <= len(code.arcs) or not code.arcs[arc - 1]:
        raise ReplayError(f"arc {arc} carries no crossing to exchange")

    groups = [list(p) for p in code.components] + [list(p) for p in code.arcs]
    arc_idx = g + arc - 1
    last = len(groups[arc_idx]) - 1
    cid, _arc_over = groups[arc_idx][last]
    sign = code.sign_map[cid]
    s_idx, s_pos, s_over = _locate_other_pass(groups, cid, (arc_idx, last))

    side = state.sides[arc - 1]
    sigma = sign * (1 if side == DEFAULT_ARC_SIDE else -1) * (-1 if s_over else 1)
    p, q = [max(code.crossing_ids) + k for k in (1, 2)]

    groups[arc_idx].pop()
    strand = [(p, s_over), (q, s_over)] if sigma == 1 else [(q, s_over), (p, s_over)]
    groups[s_idx][s_pos:s_pos + 1] = strand
    loop = groups[arc - 1]
    groups[arc - 1] = [(q, not s_over)] + loop + [(p, not s_over)]

    signs = dict(code.signs)
    del signs[cid]
    signs[p] = -sign
    signs[q] = sign
    state.replace(GaussCode(
        components=tuple(tuple(x) for x in groups[:g]),
        signs=tuple(sorted(signs.items())),
        arcs=tuple(tuple(x) for x in groups[g:]),
    ))
    logger.debug("Exchanged crossing %d off arc %d into %d, %d", cid, arc, p, q)
    return Move(kind=KIND_EXCHANGE, site=cid, arc=arc)


def exchange_arc_crossings(sp: SpineDiagram) -> tuple:
    """Normal form of sp and the exchange moves that reach it."""
    state = UnknotState(sp)
    moves = _normalize(state)
    return state.spine, moves


def _normalize(state: UnknotState) -> list:
    moves = []
    while (move := exchange_arc_crossing(state)) is not None:
        moves.append(move)
    if moves:
        logger.info("Exchanged %d arc crossing(s) for band crossings.", len(moves))
    return moves


# ------------------------------------------------------------------
# Descending plan
# ------------------------------------------------------------------
def _resolve_order(genus: int, order: Optional[Sequence[int]]) -> tuple:
    if order is None:
        return tuple(range(1, genus + 1))
    order = tuple(order)
    if sorted(order) != list(range(1, genus + 1)):
        raise ComponentError(f"order {list(order)} is not a permutation of loops 1..{genus}")
    return order


def _traversal(code: GaussCode, order: tuple, basepoints: Mapping[int, int]) -> list:
    """Loop passes in traversal order; a basepoint starts loop i just before its first pass at that crossing."""
    walk = []
    for i in order:
        passes = list(code.components[i - 1])
        if i in basepoints:
            starts = [j for j, (cid, _) in enumerate(passes) if cid == basepoints[i]]
            if not starts:
                raise ComponentError(f"basepoint crossing {basepoints[i]} is not on loop {i}")
            passes = passes[starts[0]:] + passes[:starts[0]]
        walk.extend(passes)
    return walk


def _check_basepoints(genus: int, basepoints: Optional[Mapping[int, int]]) -> dict:
    basepoints = dict(basepoints or {})
    for loop in basepoints:
        if not 1 <= loop <= genus:
            raise ComponentError(f"basepoint given for unknown loop {loop}")
    return basepoints


def _first_under(code: GaussCode, order, basepoints) -> frozenset:
    seen, flips = set(), set()
    for cid, over in _traversal(code, order, basepoints):
        if cid not in seen:
            seen.add(cid)
            if not over:
                flips.add(cid)
    return frozenset(flips)


def descending_plan(sp: SpineDiagram, order: Optional[Sequence[int]] = None,
                    basepoints: Optional[Mapping[int, int]] = None) -> frozenset:
    """Crossings first met as under when the loops are traversed in order from their basepoints."""
    if not sp.normal_form:
        raise NormalFormError(ERROR_MESSAGES['normal_form'])
    code = diagram_service.gauss_code(sp)
    plan = _first_under(code, _resolve_order(sp.genus, order), _check_basepoints(sp.genus, basepoints))
    logger.info("Descending plan flips %d of %d crossing(s).", len(plan), sp.crossing_count)
    return plan


def is_descending(code: GaussCode, order: Optional[Sequence[int]] = None,
                  basepoints: Optional[Mapping[int, int]] = None) -> bool:
    genus = len(code.components)
    if any(code.arcs):
        return False
    return not _first_under(code, _resolve_order(genus, order), _check_basepoints(genus, basepoints))


# ------------------------------------------------------------------
# Unknotting
# ------------------------------------------------------------------
def _is_standard(state: UnknotState) -> bool:
    return (not state.code.signs
            and all(side == DEFAULT_ARC_SIDE for side in state.sides)
            and state.wedge_order == tuple(range(1, state.genus + 1)))


def _release(state: UnknotState, order: tuple, basepoints: Mapping[int, int]):
    """
    Release a descending diagram whose arcs cross nothing. Its loops are
    layered unknots, so every crossing is dropped and the arcs are
    straightened at v_i and at x. The diagram released from is kept on
    the state for the attestation and the delta record.
    """
    if not is_descending(state.code, order, basepoints):
        raise ReplayError(ERROR_MESSAGES['not_descending'])
    state.before_release = state.spine
    flat = diagram_service.drop_crossings(state.code, state.code.crossing_ids)
    state.replace(flat, (DEFAULT_ARC_SIDE,) * len(state.sides), tuple(sorted(state.wedge_order)))
    logger.debug("Released %d crossing(s).", len(state.before_release.crossings))


def attest(final: SpineDiagram, counters: Sequence[tuple] = (), before: Optional[SpineDiagram] = None,
           order: Optional[Sequence[int]] = None,
           basepoints: Optional[Mapping[int, int]] = None) -> StandardFormAttestation:
    """
    Standard-form flags. Loop triviality and arc freedom are read off the
    diagram release started from (final itself when nothing was
    released); the layout flag compares final with the standard spine.
    """
    source = before if before is not None else final
    code = diagram_service.gauss_code(source)
    undescended = _first_under(code, _resolve_order(source.genus, order),
                               _check_basepoints(source.genus, basepoints))
    standard = diagram_service.serialize(diagram_service.standard_spine(final.genus))
    return StandardFormAttestation(
        loops_split_trivial=not undescended,
        twists_zero=all(count == 0 for _band, count in counters),
        arcs_crossing_free=not any(code.arcs),
        standard_layout=diagram_service.serialize(final) == standard,
    )


def _unknot(state: UnknotState, moves: list, system: SeifertSystemData,
            order: tuple, basepoints: dict) -> UnknotResult:
    normalized = state.spine
    plan = _first_under(state.code, order, basepoints)
    logger.info("Descending plan flips %d of %d crossing(s).", len(plan), normalized.crossing_count)

    for cid in sorted(plan):
        _, component = surgery_service.emit_band_crossing_change(state, cid)
        moves.append(Move(kind=KIND_BCC, site=cid, component=component.id))

    for band, count in state.counter_items():
        if count:
            _, component = surgery_service.emit_full_twist(state, band, -count)
            moves.append(Move(kind=KIND_TWIST, site=band, n=-count, component=component.id))

    if not _is_standard(state):
        if not is_descending(state.code, order, basepoints):
            raise PipelineRefusal(ERROR_MESSAGES['not_descending'])
        _release(state, order, basepoints)
        moves.append(Move(kind=KIND_RELEASE))

    final = state.spine
    counters = state.counter_items()
    transcript = MoveTranscript(moves=tuple(moves), order=order, basepoints=tuple(sorted(basepoints.items())))
    attestation = attest(final, counters, state.before_release, order, basepoints)
    logger.info("Unknotted: %d move(s), %d surgery component(s), attestation %s.",
                len(transcript), len(state.components), 'pass' if attestation.passes else 'fail')
    return UnknotResult(
        transcript=transcript,
        link=state.link(),
        final=final,
        attestation=attestation,
        normalized=normalized,
        system=system,
        counters=counters,
        before_release=state.before_release,
    )


def _prepare(sp: SpineDiagram, order, basepoints) -> tuple:
    state = UnknotState(sp)
    moves = _normalize(state)
    return state, moves, _resolve_order(sp.genus, order), _check_basepoints(sp.genus, basepoints)


def unknot_spine(sp: SpineDiagram, system: Optional[SeifertSystemData] = None,
                 order: Optional[Sequence[int]] = None,
                 basepoints: Optional[Mapping[int, int]] = None) -> UnknotResult:
    """
    Unknot sp by band-crossing changes and full twists. Basepoints name a
    crossing per loop and refer to the diagram after arc exchange.
    """
    state, moves, order, basepoints = _prepare(sp, order, basepoints)
    if system is None:
        system = seifert_service.spine_seifert_system(state.spine)
    elif system.genus != sp.genus:
        raise ComponentError(f"surface system has {system.genus} surfaces for a genus {sp.genus} spine")
    return _unknot(state, moves, system, order, basepoints)


# ------------------------------------------------------------------
# Replay
# ------------------------------------------------------------------
def replay_state(sp: SpineDiagram, transcript: MoveTranscript) -> UnknotState:
    """Re-apply every move to sp; raises ReplayError on the first move that does not apply."""
    state = UnknotState(sp)
    order = _resolve_order(sp.genus, transcript.order or None)
    basepoints = dict(transcript.basepoints)
    for index, move in enumerate(transcript.moves, start=1):
        try:
            if move.kind == KIND_EXCHANGE:
                done = exchange_arc_crossing(state, move.arc)
                if done.site != move.site:
                    raise ReplayError(f"arc {move.arc} exchanges crossing {done.site}, not {move.site}")
            elif move.kind == KIND_BCC:
                surgery_service.emit_band_crossing_change(state, move.site)
            elif move.kind == KIND_TWIST:
                surgery_service.emit_full_twist(state, move.site, move.n)
            elif move.kind == KIND_RELEASE:
                _release(state, order, basepoints)
            else:
                raise ReplayError(f"unknown move kind {move.kind!r}")
        except HandlecertError as exc:
            raise ReplayError(f"move {index}: {exc}") from exc
    return state


def replay_transcript(sp: SpineDiagram, transcript: MoveTranscript) -> SpineDiagram:
    return replay_state(sp, transcript).spine


# ------------------------------------------------------------------
# Dual curves and the closed-surface certificate
# ------------------------------------------------------------------
def dual_curve_record(diagram: SpineDiagram, order: Optional[Sequence[int]] = None) -> list:
    """
    Crossings (i, j) of the meridian C_i with the dual curve C''_j.

    C_i sits on the first edge of loop i and C''_j runs along loop j. The
    disk of loop j lies in its own layer under the loops earlier in the
    order, so loop i pierces it, and C''_j crosses C_i, at every
    crossing where loop i passes over loop j while coming later.
    """
    meridian_edges = {loop[0]: i for i, loop in enumerate(diagram.loops, start=1)}
    record = []
    for j, loop in enumerate(diagram.loops, start=1):
        for e in loop:
            if e in meridian_edges:
                record.append((meridian_edges[e], j))

    rank = {loop: k for k, loop in enumerate(_resolve_order(diagram.genus, order))}
    over_loop, under_loop = {}, {}
    for i, passes in enumerate(diagram_service.gauss_code(diagram).components, start=1):
        for cid, over in passes:
            (over_loop if over else under_loop)[cid] = i
    for cid in sorted(over_loop):
        i, j = over_loop[cid], under_loop.get(cid)
        if j is not None and rank[i] > rank[j]:
            record.append((i, j))
    return record


def _labels(genus: int) -> tuple:
    return tuple(f"C{i}" for i in range(1, genus + 1)), tuple(f"C''{i}" for i in range(1, genus + 1))


def heegaard_dualize(sp: SpineDiagram, order: Optional[Sequence[int]] = None,
                     basepoints: Optional[Mapping[int, int]] = None) -> DualizeResult:
    """
    Surgery link L' in the complement after which the loops bound
    disjoint disks, with the delta record of C and C''.

    Only the loops need disks, so arc crossings are pushed off and no
    twist or release is needed: L' changes the loop crossings first met
    as under. Basepoints name loop crossings of sp.
    """
    g = sp.genus
    order = _resolve_order(g, order)
    basepoints = _check_basepoints(g, basepoints)
    code = diagram_service.gauss_code(sp)
    loops_only = diagram_service.drop_crossings(code, {cid for arc in code.arcs for cid, _ in arc})
    state = UnknotState(diagram_service.spine_from_gauss(loops_only, sp.sides, diagram_service.wedge_order(sp)))
    for cid in sorted(_first_under(state.code, order, basepoints)):
        surgery_service.emit_band_crossing_change(state, cid)

    link = state.link()
    records = [homology_service.strand_record(c.strands, g) for c in link.components]
    meridians, duals = _labels(g)
    delta = homology_service.intersection_delta(meridians, duals, dual_curve_record(state.spine, order))
    logger.info("Dualized: %d surgery component(s), delta %s.", len(link), 'pass' if delta.passes else 'fail')
    return DualizeResult(
        link=link,
        meridians=meridians,
        duals=duals,
        delta=delta,
        null_homologous=homology_service.is_null_homologous(records, sp.genus),
    )


# ------------------------------------------------------------------
# Full run
# ------------------------------------------------------------------
def run_theorem_main(sp: SpineDiagram, mode: str, order: Optional[Sequence[int]] = None,
                     basepoints: Optional[Mapping[int, int]] = None) -> CertificateBundle:
    """
    Certify that a 1/n surgery along the emitted link turns the spine into
    standard planar form. part1 certifies a null-homologous link, part2 a
    completely null-homologous one disjoint from the surface system.
    """
    if mode not in PIPELINE_MODES:
        raise ComponentError(f"unknown mode {mode!r}")
    validation = diagram_service.validate(sp)
    if not validation.ok:
        raise DiagramSemanticError(validation.issues)

    g = sp.genus
    state, moves, order, basepoints = _prepare(sp, order, basepoints)
    system = seifert_service.spine_seifert_system(state.spine)
    if mode == MODE_PART2 and not system.completely_disjoint:
        logger.warning("Refusing part2: %s", ERROR_MESSAGES['shared_system'])
        raise PipelineRefusal(ERROR_MESSAGES['shared_system'])

    result = _unknot(state, moves, system, order, basepoints)
    link = result.link
    classes = tuple((c.id, homology_service.class_from_strands(c.strands, g)) for c in link.components)
    total = HomologyClass.zero(g)
    for _cid, cls in classes:
        total = total + cls

    blowdown = surgery_service.verify_reflexive(link)
    core = surgery_service.core_link_check(link, surgery_service.surgery_boundaries(link))
    tubing = surgery_service.tube_system(surgery_service.tube_counts(link, g))
    meridians, duals = _labels(g)
    released_from = result.before_release if result.before_release is not None else result.final
    delta = homology_service.intersection_delta(meridians, duals, dual_curve_record(released_from, order))
    replayed = replay_transcript(sp, result.transcript)
    replay_ok = diagram_service.serialize(replayed) == diagram_service.serialize(result.final)

    failures = []
    if not blowdown.valid:
        failures.append(f"blowdown: {blowdown.reason}")
    if mode == MODE_PART2:
        if not all(cls.is_zero for _cid, cls in classes):
            failures.append("homology: link is not completely null-homologous")
    elif not total.is_zero:
        failures.append("homology: link is not null-homologous")
    if not core.passes:
        failures.append("core: a meridian meets a boundary curve more than once")
    if not delta.passes:
        failures.append("delta: intersection matrix is not the identity")
    if not result.attestation.passes:
        failures.append(f"attestation: failed {','.join(result.attestation.failed_flags())}")
    if not replay_ok:
        failures.append("transcript: replay does not reproduce the final diagram")

    bundle = CertificateBundle(
        mode=mode,
        source=sp,
        validation=validation,
        system=system,
        spanning=seifert_service.restrict_to_exterior(system, g),
        transcript=result.transcript,
        final=result.final,
        link=link,
        classes=classes,
        total=total,
        blowdown=blowdown,
        core=core,
        tubing=tubing,
        attestation=result.attestation,
        delta=delta,
        replay_ok=replay_ok,
        failures=tuple(failures),
    )
    logger.info("Bundle %s (mode=%s).", 'pass' if bundle.passes else 'fail', mode)
    return bundle
