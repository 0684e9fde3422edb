"""
Surgery models: 1/n-framed components, blow-down certificates, core-link
meridian records and tubed surfaces.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from app.models.homology import HomologyClass


def format_framing(framing: Fraction) -> str:
    """1/n framings print as '1/<n>'; anything else as '<p>/<q>'."""
    if abs(framing.numerator) == 1:
        return f"1/{framing.numerator * framing.denominator}"
    return f"{framing.numerator}/{framing.denominator}"


def parse_framing(text: str) -> Fraction:
    p, _, q = text.partition('/')
    return Fraction(int(p), int(q or 1))


@dataclass(frozen=True)
class Strand:
    """An encircled strand: loop index, the edge it runs along, ±1 direction."""
    loop: int
    edge: int
    orientation: int

    def to_token(self) -> str:
        return f"{self.loop}:{self.edge}:{self.orientation:+d}"

    @classmethod
    def from_token(cls, token: str) -> 'Strand':
        loop, edge, orientation = token.split(':')
        return cls(loop=int(loop), edge=int(edge), orientation=int(orientation))


@dataclass(frozen=True)
class SurgeryComponent:
    id: int
    kind: str
    framing: Fraction
    site: int
    strands: tuple[Strand, ...]
    homology: HomologyClass

    @property
    def n(self) -> Optional[int]:
        """n of the slope 1/n, None when the framing is not of that form."""
        if abs(self.framing.numerator) != 1:
            return None
        return self.framing.numerator * self.framing.denominator

    def to_line(self) -> str:
        strands = ','.join(s.to_token() for s in self.strands) or '-'
        return (f"surgery {self.id} kind={self.kind} site={self.site} "
                f"framing={format_framing(self.framing)} class={self.homology} strands={strands}")


@dataclass(frozen=True)
class FramedSurgeryLink:
    components: tuple[SurgeryComponent, ...] = ()
    unlinked_attested: bool = True

    def __len__(self) -> int:
        return len(self.components)

    def component(self, component_id: int) -> Optional[SurgeryComponent]:
        for c in self.components:
            if c.id == component_id:
                return c
        return None

    def lines(self) -> list:
        out = [c.to_line() for c in self.components]
        out.append(f"unlinked: {'attested' if self.unlinked_attested else 'missing'}")
        return out


@dataclass(frozen=True)
class BlowdownStep:
    index: int
    component_id: int
    ok: bool
    reason: str

    def to_line(self) -> str:
        verdict = 'ok' if self.ok else 'fail'
        return f"blowdown step {self.index}: component {self.component_id} {verdict}({self.reason})"


@dataclass(frozen=True)
class BlowdownCertificate:
    """One blow-down per component; valid when every step is justified."""
    steps: tuple[BlowdownStep, ...] = ()

    @property
    def valid(self) -> bool:
        return all(step.ok for step in self.steps)

    @property
    def reason(self) -> str:
        for step in self.steps:
            if not step.ok:
                return step.reason
        return ''

    def lines(self) -> list:
        out = [step.to_line() for step in self.steps]
        out.append(f"blowdown: {'valid' if self.valid else 'invalid'}")
        return out


@dataclass(frozen=True)
class CoreLinkData:
    """Per component, meridian intersection counts with each recorded boundary curve."""
    counts: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @property
    def passes(self) -> bool:
        return all(c == 1 for _cid, row in self.counts for c in row)

    def lines(self) -> list:
        out = []
        for cid, row in self.counts:
            verdict = 'pass' if all(c == 1 for c in row) else 'fail'
            out.append(f"core: component {cid} meets={','.join(str(c) for c in row)} {verdict}")
        out.append(f"core: {'pass' if self.passes else 'fail'}")
        return out


@dataclass(frozen=True)
class TubedSurface:
    index: int
    tubes: int

    @property
    def chi(self) -> int:
        return 1 - 2 * self.tubes

    @property
    def genus(self) -> int:
        return self.tubes

    def to_line(self) -> str:
        return (f"tubing {self.index}: tubes={self.tubes} chi={self.chi} "
                f"genus={self.genus} boundary=C{self.index}")


@dataclass(frozen=True)
class TubedSystemData:
    surfaces: tuple[TubedSurface, ...] = field(default=())

    @property
    def genera(self) -> tuple:
        return tuple(s.genus for s in self.surfaces)

    def lines(self) -> list:
        return [s.to_line() for s in self.surfaces]
