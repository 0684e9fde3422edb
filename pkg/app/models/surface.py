"""
Seifert surface models: circle partitions, disk-band surfaces and the
per-loop surface system of a spine.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class SeifertCircleSet:
    """Edges partitioned into the circles left after oriented smoothing."""
    circles: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.circles)

    def circle_of_edge(self) -> dict:
        return {e: index for index, circle in enumerate(self.circles) for e in circle}


@dataclass(frozen=True)
class SurfaceData:
    """
    Disk-band surface: one disk per Seifert circle, one half-twisted band
    per crossing (crossing id, sign). Stored combinatorially only.
    """
    disks: int
    bands: tuple[tuple[int, int], ...]
    boundary: int
    genus: int
    pieces: int = 1

    @property
    def chi(self) -> int:
        return self.disks - len(self.bands)

    @property
    def band_ids(self) -> list:
        return [band for band, _sign in self.bands]

    def to_line(self, label) -> str:
        return (f"surface {label}: disks={self.disks} bands={len(self.bands)} "
                f"chi={self.chi} genus={self.genus} boundary={self.boundary}")


@dataclass(frozen=True)
class SeifertSystemData:
    """
    One surface F_i' per loop plus what the surfaces of different loops
    share when the algorithm runs on all loops at once.
    """
    surfaces: tuple[SurfaceData, ...]
    shared_disks: tuple[int, ...] = ()
    shared_bands: tuple[int, ...] = ()

    @property
    def genus(self) -> int:
        return len(self.surfaces)

    @property
    def completely_disjoint(self) -> bool:
        return not self.shared_disks and not self.shared_bands

    def lines(self) -> list:
        out = [surface.to_line(i) for i, surface in enumerate(self.surfaces, start=1)]
        disks = ','.join(str(d) for d in self.shared_disks) or '-'
        bands = ','.join(str(b) for b in self.shared_bands) or '-'
        flag = 'true' if self.completely_disjoint else 'false'
        out.append(f"disjoint: completely={flag} shared_disks={disks} shared_bands={bands}")
        return out


@dataclass(frozen=True)
class SpanningSurface:
    index: int
    genus: int

    @property
    def boundary_label(self) -> str:
        return f"C{self.index}"

    @property
    def meridian_label(self) -> str:
        return f"D{self.index}"

    def to_line(self) -> str:
        return (f"spanning {self.index}: boundary={self.boundary_label} "
                f"genus={self.genus} paired={self.meridian_label}")


@dataclass(frozen=True)
class SpanningSystemSummary:
    """Surfaces restricted to the handlebody exterior, paired with meridian disks."""
    surfaces: tuple[SpanningSurface, ...]

    @property
    def genera(self) -> tuple:
        return tuple(s.genus for s in self.surfaces)

    def lines(self) -> list:
        return [s.to_line() for s in self.surfaces]
