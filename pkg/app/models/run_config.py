"""
RunConfig: one CLI invocation, built from parsed arguments.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from app.utils.config import DEFAULT_JOBS, DEFAULT_MODE


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple[Path, ...] = ()
    mode: str = DEFAULT_MODE
    order: Optional[tuple[int, ...]] = None
    basepoints: tuple[tuple[int, int], ...] = field(default=())
    out: Optional[Path] = None
    jobs: int = DEFAULT_JOBS
    verbosity: int = 0
    spine_input: Optional[Path] = None

    @property
    def input(self) -> Path:
        return self.inputs[0]

    @property
    def basepoint_map(self) -> dict:
        return dict(self.basepoints)

    @classmethod
    def from_dict(cls, data: dict) -> 'RunConfig':
        return cls(
            subcommand=data.get('subcommand', ''),
            inputs=tuple(Path(p) for p in data.get('inputs', ())),
            mode=data.get('mode') or DEFAULT_MODE,
            order=tuple(data['order']) if data.get('order') else None,
            basepoints=tuple(data.get('basepoints') or ()),
            out=Path(data['out']) if data.get('out') else None,
            jobs=data.get('jobs') or DEFAULT_JOBS,
            verbosity=data.get('verbosity', 0),
            spine_input=Path(data['spine_input']) if data.get('spine_input') else None,
        )
