"""
Certificate bundle text: writing, reading and independent re-checking.

The bundle is line oriented. Section headers are bare words in a fixed
order; every other line is 'key: value' text produced by the model
to_line()/lines() helpers, so a bundle can be diffed and re-parsed.
"""
import logging
import re
from typing import Optional

from app.models.certificate import CertificateBundle, Move, MoveTranscript, StandardFormAttestation
from app.models.diagram import SpineDiagram
from app.models.homology import HomologyClass, IntersectionMatrix, format_class
from app.models.surgery import FramedSurgeryLink, Strand, SurgeryComponent, parse_framing
from app.services import (
    diagram_service,
    homology_service,
    seifert_service,
    surgery_service,
    unknotting_service,
)
from app.utils.config import BUNDLE_BANNER, BUNDLE_SECTIONS, ERROR_MESSAGES, MODE_PART2, PIPELINE_MODES
from app.utils.errors import BundleFormatError, HandlecertError

logger = logging.getLogger(__name__)

_SURGERY_RE = re.compile(
    r'^surgery (\d+) kind=(\S+) site=(\d+) framing=(-?\d+/-?\d+) class=\(([-\d,]*)\) strands=(\S+)$')
_MOVE_RE = re.compile(r'^move (\d+): (.*)$')


def _flag(value: bool) -> str:
    return 'true' if value else 'false'


# ------------------------------------------------------------------
# Writing
# ------------------------------------------------------------------
def bundle_sections(bundle: CertificateBundle) -> dict:
    final_lines = diagram_service.serialize(bundle.final).splitlines()
    homology = [f"homology: component {cid} class={cls}" for cid, cls in bundle.classes]
    homology.append(
        f"homology: total class={bundle.total} null={_flag(bundle.null_homologous)} "
        f"completely={_flag(bundle.completely_null_homologous)}")
    result = [f"bundle: {'pass' if bundle.passes else 'fail'} mode={bundle.mode}"]
    result += [f"reason: {reason}" for reason in bundle.failures]
    return {
        'INPUT': [f"input: {line}" for line in diagram_service.serialize(bundle.source).splitlines()],
        'VALIDATION': bundle.validation.lines(),
        'SURFACES': bundle.system.lines() + bundle.spanning.lines(),
        'TRANSCRIPT': bundle.transcript.lines() + [f"final: {line}" for line in final_lines],
        'SURGERY': bundle.link.lines(),
        'HOMOLOGY': homology,
        'BLOWDOWN': bundle.blowdown.lines(),
        'CORE': bundle.core.lines(),
        'TUBING': bundle.tubing.lines(),
        'DELTA': [bundle.delta.to_line() if bundle.delta is not None else "delta: - fail"],
        'ATTESTATION': [bundle.attestation.to_line()],
        'RESULT': result,
    }


def bundle_to_text(bundle: CertificateBundle) -> str:
    out = [BUNDLE_BANNER, f"mode: {bundle.mode}"]
    sections = bundle_sections(bundle)
    for name in BUNDLE_SECTIONS:
        out.append(name)
        out.extend(sections[name])
    return '\n'.join(out) + '\n'


# ------------------------------------------------------------------
# Reading
# ------------------------------------------------------------------
def read_bundle(text: str) -> tuple:
    """(mode, {section: [lines]}); raises BundleFormatError on layout problems."""
    lines = [line.rstrip() for line in text.splitlines() if line.strip()]
    if len(lines) < 2 or lines[0] != BUNDLE_BANNER:
        raise BundleFormatError("missing bundle banner")
    if not lines[1].startswith('mode: ') or lines[1][6:] not in PIPELINE_MODES:
        raise BundleFormatError(f"bad mode line {lines[1]!r}")
    mode = lines[1][6:]

    sections: dict = {}
    current = None
    for line in lines[2:]:
        if line in BUNDLE_SECTIONS:
            if line in sections:
                raise BundleFormatError(f"duplicate section {line}")
            current = line
            sections[current] = []
        elif current is None:
            raise BundleFormatError(f"line outside any section: {line!r}")
        else:
            sections[current].append(line)
    found = [name for name in BUNDLE_SECTIONS if name in sections]
    order = [line for line in lines[2:] if line in BUNDLE_SECTIONS]
    if found != list(BUNDLE_SECTIONS) or order != list(BUNDLE_SECTIONS):
        raise BundleFormatError("sections missing or out of order")
    return mode, sections


def _fields(text: str) -> dict:
    return dict(token.split('=', 1) for token in text.split() if '=' in token)


def parse_surgery(lines: list) -> FramedSurgeryLink:
    components = []
    attested = False
    for line in lines:
        if line.startswith('unlinked: '):
            attested = line == 'unlinked: attested'
            continue
        match = _SURGERY_RE.match(line)
        if not match:
            raise BundleFormatError(f"bad surgery line {line!r}")
        cid, kind, site, framing, coords, strands = match.groups()
        strand_list = () if strands == '-' else tuple(Strand.from_token(t) for t in strands.split(','))
        try:
            parsed_framing = parse_framing(framing)
        except ZeroDivisionError as exc:
            raise BundleFormatError(f"bad framing {framing!r}") from exc
        components.append(SurgeryComponent(
            id=int(cid),
            kind=kind,
            framing=parsed_framing,
            site=int(site),
            strands=strand_list,
            homology=HomologyClass(tuple(int(c) for c in coords.split(',') if c)),
        ))
    return FramedSurgeryLink(components=tuple(components), unlinked_attested=attested)


def parse_transcript(lines: list) -> tuple:
    """(MoveTranscript, final diagram text)."""
    order: tuple = ()
    basepoints: tuple = ()
    moves = []
    final = []
    for line in lines:
        if line.startswith('order: '):
            body = line[7:]
            order = () if body == '-' else tuple(int(i) for i in body.split(','))
        elif line.startswith('basepoints: '):
            body = line[12:]
            basepoints = () if body == '-' else tuple(
                tuple(int(v) for v in pair.split(':')) for pair in body.split(','))
        elif line.startswith('final: '):
            final.append(line[7:])
        else:
            match = _MOVE_RE.match(line)
            if not match:
                raise BundleFormatError(f"bad transcript line {line!r}")
            moves.append(Move.from_dict(_fields(match.group(2))))
    transcript = MoveTranscript(moves=tuple(moves), order=order, basepoints=basepoints)
    return transcript, '\n'.join(final) + '\n'


def _single(lines: list, prefix: str) -> str:
    for line in lines:
        if line.startswith(prefix):
            return line[len(prefix):]
    raise BundleFormatError(f"no line starting with {prefix!r}")


def _prefixed(lines: list, prefix: str) -> str:
    """Diagram text stored one 'prefix line' per bundle line."""
    if not lines or any(not line.startswith(prefix) for line in lines):
        raise BundleFormatError(f"expected diagram lines starting with {prefix!r}")
    return '\n'.join(line[len(prefix):] for line in lines) + '\n'


# ------------------------------------------------------------------
# Independent re-check
# ------------------------------------------------------------------
def certify_text(text: str, spine: Optional[SpineDiagram] = None) -> dict:
    """
    Re-check a bundle from its text alone. The recorded input is
    validated and the transcript replayed from it; every derived member
    is recomputed and compared with what the bundle states. With spine
    given, the recorded input must be that diagram.

    Returns:
        {'success': bool, 'reasons': [str, ...]}
    """
    try:
        mode, sections = read_bundle(text)
        source = diagram_service.read_diagram(_prefixed(sections['INPUT'], 'input: '))
        if not isinstance(source, SpineDiagram):
            raise BundleFormatError("INPUT does not hold a spine")
        transcript, final_text = parse_transcript(sections['TRANSCRIPT'])
        final = diagram_service.parse_spine(final_text)
        link = parse_surgery(sections['SURGERY'])
    except (HandlecertError, ValueError) as exc:
        return {'success': False, 'reasons': [f"unreadable bundle: {exc}"]}

    g = source.genus
    reasons = []

    if spine is not None and diagram_service.serialize(spine) != diagram_service.serialize(source):
        reasons.append("input: bundle records a different input diagram")
    report = diagram_service.validate(source)
    if not report.ok:
        reasons.append("validation: input diagram did not validate")
    if sections['VALIDATION'] != report.lines():
        reasons.append("validation: recorded report differs from recomputation")
    if final.genus != g:
        reasons.append(f"transcript: final diagram has genus {final.genus}, input has {g}")

    state = None
    if report.ok:
        try:
            normal, _moves = unknotting_service.exchange_arc_crossings(source)
            system = seifert_service.spine_seifert_system(normal)
            surfaces = system.lines() + seifert_service.restrict_to_exterior(system, g).lines()
            if sections['SURFACES'] != surfaces:
                reasons.append("surfaces: recorded system differs from recomputation")
            if mode == MODE_PART2 and not system.completely_disjoint:
                reasons.append(f"surfaces: {ERROR_MESSAGES['shared_system']}")
        except HandlecertError as exc:
            reasons.append(f"surfaces: {exc}")
        try:
            state = unknotting_service.replay_state(source, transcript)
        except HandlecertError as exc:
            reasons.append(f"transcript: {exc}")

    if state is not None:
        if diagram_service.serialize(state.spine) != final_text:
            reasons.append("transcript: replay does not reproduce the final diagram")
        if state.link().lines() != link.lines():
            reasons.append("transcript: replayed surgery link differs from the recorded one")

    classes = []
    for component in link.components:
        try:
            cls = homology_service.class_from_strands(component.strands, g)
        except HandlecertError as exc:
            reasons.append(f"surgery: component {component.id}: {exc}")
            continue
        if cls != component.homology:
            reasons.append(f"surgery: component {component.id} class {component.homology} != recomputed {cls}")
        classes.append((component.id, cls))
    total = [sum(c.coords[i] for _cid, c in classes) for i in range(g)]
    homology = [f"homology: component {cid} class={cls}" for cid, cls in classes]
    null = not any(total)
    completely = all(c.is_zero for _cid, c in classes)
    homology.append(f"homology: total class={format_class(total)} null={_flag(null)} "
                    f"completely={_flag(completely)}")
    if sections['HOMOLOGY'] != homology:
        reasons.append("homology: recorded table differs from recomputation")
    if mode == MODE_PART2 and not completely:
        reasons.append("homology: link is not completely null-homologous")
    if not null:
        reasons.append("homology: link is not null-homologous")

    blowdown = surgery_service.verify_reflexive(link)
    if not blowdown.valid:
        reasons.append(f"blowdown: {blowdown.reason}")
    if sections['BLOWDOWN'] != blowdown.lines():
        reasons.append("blowdown: recorded certificate differs from recomputation")

    core = surgery_service.core_link_check(link, surgery_service.surgery_boundaries(link))
    if not core.passes:
        reasons.append("core: a meridian meets a boundary curve more than once")
    if sections['CORE'] != core.lines():
        reasons.append("core: recorded counts differ from recomputation")

    try:
        tubing = surgery_service.tube_system(surgery_service.tube_counts(link, g))
        if sections['TUBING'] != tubing.lines():
            reasons.append("tubing: recorded surfaces differ from recomputation")
    except (HandlecertError, IndexError):
        reasons.append("tubing: surgery strands name unknown loops")

    try:
        recorded = IntersectionMatrix.from_text(_single(sections['DELTA'], 'delta: ').rsplit(' ', 1)[0])
    except (BundleFormatError, ValueError):
        recorded = IntersectionMatrix(entries=())
    if not recorded.passes or len(recorded.entries) != g:
        reasons.append("delta: intersection matrix is not the identity")

    try:
        recorded_flags = StandardFormAttestation.from_dict(_fields(_single(sections['ATTESTATION'], 'attestation: ')))
    except BundleFormatError:
        recorded_flags = StandardFormAttestation(False, False, False, False)
    if not recorded_flags.passes:
        reasons.append(f"attestation: failed {','.join(recorded_flags.failed_flags())}")

    if state is not None:
        order = transcript.order or None
        released_from = state.before_release if state.before_release is not None else state.spine
        try:
            meridians = tuple(f"C{i}" for i in range(1, g + 1))
            duals = tuple(f"C''{i}" for i in range(1, g + 1))
            recomputed = homology_service.intersection_delta(
                meridians, duals, unknotting_service.dual_curve_record(released_from, order))
            if recomputed.entries != recorded.entries:
                reasons.append("delta: recorded matrix differs from the replayed run")
            recheck = unknotting_service.attest(
                state.spine, state.counter_items(), state.before_release, order, dict(transcript.basepoints))
            if recheck != recorded_flags:
                reasons.append("attestation: recorded flags differ from the replayed run")
        except HandlecertError as exc:
            reasons.append(f"transcript: {exc}")

    computed_pass = not reasons
    recorded_result = sections['RESULT'][0] if sections['RESULT'] else ''
    if recorded_result != f"bundle: {'pass' if computed_pass else 'fail'} mode={mode}":
        reasons.append("result: recorded verdict disagrees with the re-check")

    logger.info("Certify: %s (%d reason(s)).", 'pass' if not reasons else 'fail', len(reasons))
    return {'success': not reasons, 'reasons': reasons}


# ------------------------------------------------------------------
# Subcommand reports
# ------------------------------------------------------------------
def dualize_lines(result) -> list:
    out = result.link.lines()
    out.append(f"homology: null={_flag(result.null_homologous)}")
    out.append("curves: " + ' '.join(f"{c}/{d}" for c, d in zip(result.meridians, result.duals)))
    out.append(result.delta.to_line())
    return out
