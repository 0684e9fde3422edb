"""
Transcript, attestation and certificate bundle models.
"""
from dataclasses import dataclass, field
from typing import Optional

from app.models.diagram import SpineDiagram, ValidationReport
from app.models.homology import HomologyClass, IntersectionMatrix
from app.models.surface import SeifertSystemData, SpanningSystemSummary
from app.models.surgery import (
    BlowdownCertificate,
    CoreLinkData,
    FramedSurgeryLink,
    TubedSystemData,
)
from app.utils.config import KIND_EXCHANGE, KIND_TWIST


@dataclass(frozen=True)
class Move:
    """
    One transcript entry. site is a crossing id (the flipped crossing,
    the twisted band or the exchanged arc crossing); release has none.
    """
    kind: str
    site: int = 0
    component: Optional[int] = None
    n: int = 0
    arc: int = 0

    def to_line(self, index: int) -> str:
        parts = [f"move {index}: kind={self.kind}"]
        if self.site:
            parts.append(f"site={self.site}")
        if self.kind == KIND_TWIST:
            parts.append(f"n={self.n}")
        if self.kind == KIND_EXCHANGE:
            parts.append(f"arc={self.arc}")
        if self.component is not None:
            parts.append(f"component={self.component}")
        return ' '.join(parts)

    @classmethod
    def from_dict(cls, data: dict) -> 'Move':
        component = data.get('component')
        return cls(
            kind=data.get('kind', ''),
            site=int(data.get('site', 0)),
            component=int(component) if component is not None else None,
            n=int(data.get('n', 0)),
            arc=int(data.get('arc', 0)),
        )


@dataclass(frozen=True)
class MoveTranscript:
    """Ordered moves plus the traversal choices the descending check replays with."""
    moves: tuple[Move, ...] = ()
    order: tuple[int, ...] = ()
    basepoints: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.moves)

    def kinds(self) -> list:
        return [m.kind for m in self.moves]

    def count(self, kind: str) -> int:
        return sum(1 for m in self.moves if m.kind == kind)

    def lines(self) -> list:
        order = ','.join(str(i) for i in self.order) or '-'
        basepoints = ','.join(f"{loop}:{cid}" for loop, cid in self.basepoints) or '-'
        out = [f"order: {order}", f"basepoints: {basepoints}"]
        out += [m.to_line(k) for k, m in enumerate(self.moves, start=1)]
        return out


@dataclass(frozen=True)
class StandardFormAttestation:
    loops_split_trivial: bool
    twists_zero: bool
    arcs_crossing_free: bool
    standard_layout: bool

    FLAGS = ('loops_split_trivial', 'twists_zero', 'arcs_crossing_free', 'standard_layout')

    @property
    def passes(self) -> bool:
        return all(getattr(self, flag) for flag in self.FLAGS)

    def failed_flags(self) -> list:
        return [flag for flag in self.FLAGS if not getattr(self, flag)]

    def to_line(self) -> str:
        body = ' '.join(f"{flag}={'true' if getattr(self, flag) else 'false'}" for flag in self.FLAGS)
        return f"attestation: {body}"

    @classmethod
    def from_dict(cls, data: dict) -> 'StandardFormAttestation':
        return cls(**{flag: data.get(flag) == 'true' for flag in cls.FLAGS})


@dataclass(frozen=True)
class UnknotResult:
    """What unknot_spine hands back."""
    transcript: MoveTranscript
    link: FramedSurgeryLink
    final: SpineDiagram
    attestation: StandardFormAttestation
    normalized: SpineDiagram
    system: SeifertSystemData
    counters: tuple[tuple[int, int], ...] = ()
    before_release: Optional[SpineDiagram] = None


@dataclass(frozen=True)
class DualizeResult:
    link: FramedSurgeryLink
    meridians: tuple[str, ...]
    duals: tuple[str, ...]
    delta: IntersectionMatrix
    null_homologous: bool

    @property
    def passes(self) -> bool:
        return self.delta.passes and self.null_homologous


@dataclass(frozen=True)
class CertificateBundle:
    """Everything a run certifies; passes only when every member passes."""
    mode: str
    source: SpineDiagram
    validation: ValidationReport
    system: SeifertSystemData
    spanning: SpanningSystemSummary
    transcript: MoveTranscript
    final: SpineDiagram
    link: FramedSurgeryLink
    classes: tuple[tuple[int, HomologyClass], ...]
    total: HomologyClass
    blowdown: BlowdownCertificate
    core: CoreLinkData
    tubing: TubedSystemData
    attestation: StandardFormAttestation
    delta: Optional[IntersectionMatrix] = None
    replay_ok: bool = True
    failures: tuple[str, ...] = field(default=())

    @property
    def null_homologous(self) -> bool:
        return self.total.is_zero

    @property
    def completely_null_homologous(self) -> bool:
        return all(cls.is_zero for _cid, cls in self.classes)

    @property
    def passes(self) -> bool:
        return not self.failures
