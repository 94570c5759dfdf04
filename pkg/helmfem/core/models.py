"""Core data models: problem kinds, regions, tags and result records."""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum, IntEnum
from typing import Dict, FrozenSet, Tuple

from .errors import ParameterError


class ProblemKind(Enum):
    SOUND_SOFT = "soundsoft"    # Dirichlet disk, domain B_5 minus B_1
    PENETRABLE = "penetrable"   # transmission disk, domain B_5

    @classmethod
    def from_name(cls, name: str) -> "ProblemKind":
        """Parse a CLI name such as 'soundsoft' or 'penetrable'."""
        key = name.strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ParameterError(f"Unknown problem kind: {name}")


class Region(IntEnum):
    INNER = 0
    PHYSICAL = 1
    PML = 2


class BoundaryTag(IntEnum):
    INNER_CIRCLE = 1
    OUTER_CIRCLE = 2
    OTHER = 3


class Sampling(Enum):
    MIDPOINT = "midpoint"          # coefficients at F_K(1/3, 1/3)
    PERPOINT = "perpoint"          # coefficients at every quadrature point
    INTERPOLATED = "interpolated"  # degree q-1 interpolant of the coefficients

    @classmethod
    def from_name(cls, name: str) -> "Sampling":
        try:
            return cls(name.strip().lower())
        except ValueError:
            supported = ", ".join(s.value for s in cls)
            raise ParameterError(f"Unknown sampling '{name}'. Supported: {supported}") from None


class Branch(Enum):
    AUTO = "auto"
    FORCE_INNER = "inner"
    FORCE_OUTER = "outer"


@dataclass(frozen=True)
class PmlProfile:
    """Power-law PML profile starting at ``start_radius``."""

    strength: float = 10.0
    exponent: int = 2
    start_radius: float = 4.0
    outer_radius: float = 5.0

    def __post_init__(self) -> None:
        if not self.strength > 0:
            raise ParameterError(f"PML strength must be positive, got {self.strength}")
        if self.exponent < 1:
            raise ParameterError(f"PML exponent must be at least 1, got {self.exponent}")
        if not 0 < self.start_radius < self.outer_radius:
            raise ParameterError(
                f"PML radii must satisfy 0 < start < outer, got {self.start_radius}, "
                f"{self.outer_radius}"
            )


@dataclass(frozen=True)
class ProblemSpec:
    """Immutable description of one scattering problem."""

    kind: ProblemKind
    wavenumber: float
    pml: PmlProfile = field(default_factory=PmlProfile)
    cutoff_center: float = 3.0
    cutoff_width: float = 0.2
    scatterer_radius: float = 1.0
    total_field_radius: float = 2.0

    def __post_init__(self) -> None:
        if not self.wavenumber > 0:
            raise ParameterError(f"Wavenumber must be positive, got {self.wavenumber}")
        if self.cutoff_width <= 0:
            raise ParameterError("Cutoff width must be positive")
        if not 0 < self.scatterer_radius < self.total_field_radius < self.pml.start_radius:
            raise ParameterError("Radii must satisfy scatterer < total-field < PML start")

    @classmethod
    def from_frequency(cls, kind: ProblemKind, f: float, **kwargs: object) -> "ProblemSpec":
        return cls(kind=kind, wavenumber=2.0 * math.pi * f, **kwargs)  # type: ignore[arg-type]

    @property
    def frequency(self) -> float:
        return self.wavenumber / (2.0 * math.pi)

    @property
    def outer_radius(self) -> float:
        return self.pml.outer_radius

    def interface_radii(self) -> Tuple[float, ...]:
        """Circles the mesh must conform to, innermost first."""
        return (self.scatterer_radius, self.pml.start_radius, self.pml.outer_radius)

    def dirichlet_tags(self) -> FrozenSet[BoundaryTag]:
        if self.kind is ProblemKind.SOUND_SOFT:
            return frozenset({BoundaryTag.INNER_CIRCLE, BoundaryTag.OUTER_CIRCLE})
        return frozenset({BoundaryTag.OUTER_CIRCLE})

    def with_wavenumber(self, k: float) -> "ProblemSpec":
        return ProblemSpec(
            kind=self.kind,
            wavenumber=k,
            pml=self.pml,
            cutoff_center=self.cutoff_center,
            cutoff_width=self.cutoff_width,
            scatterer_radius=self.scatterer_radius,
            total_field_radius=self.total_field_radius,
        )


@dataclass(frozen=True)
class ErrorReport:
    """H^1_k (or H^1) error of a discrete solution on the total-field region."""

    err: float
    nor: float
    relative: float
    element_count: int
    k: float
    p: int
    q: int
    measured_h: float
    weighted: bool = True
    inner_element_count: int = 0


@dataclass(frozen=True)
class StudyRecord:
    """One row of a study output file."""

    f: float
    hmax: float
    err: float
    nor: float
    dofs: int
    wall_seconds: float

    @property
    def relative(self) -> float:
        return self.err / self.nor if self.nor > 0 else float("nan")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi * self.f

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    def same_result(self, other: "StudyRecord") -> bool:
        """Compare everything except timing."""
        return (self.f, self.hmax, self.err, self.nor, self.dofs) == (
            other.f,
            other.hmax,
            other.err,
            other.nor,
            other.dofs,
        )
