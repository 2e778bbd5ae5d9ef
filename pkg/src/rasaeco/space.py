"""The fixed three-axis scenario grid: axis values, cuboids and cell algebra.

Every scenario claims a region of a discrete 7 x 5 x 7 grid
(aspect x lifecycle phase x hierarchy level), expressed as a list of
inclusive cuboids.  All values are immutable and all operations pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from rasaeco.diagnostics import Diagnostic


class _AxisValue:
    """Mixin giving enum members a canonical token and a stable ordinal."""

    token: str
    ordinal: int

    def __init__(self, token: str, ordinal: int) -> None:
        self.token = token
        self.ordinal = ordinal


class Aspect(_AxisValue, enum.Enum):
    AS_PLANNED = ("as-planned", 0)
    AS_OBSERVED = ("as-observed", 1)
    DIVERGENCE = ("divergence", 2)
    SCHEDULING = ("scheduling", 3)
    COST = ("cost", 4)
    SAFETY = ("safety", 5)
    ANALYTICS = ("analytics", 6)


class Phase(_AxisValue, enum.Enum):
    PLANNING = ("planning", 0)
    CONSTRUCTION = ("construction", 1)
    OPERATION = ("operation", 2)
    RENOVATION = ("renovation", 3)
    DEMOLITION = ("demolition", 4)


class Level(_AxisValue, enum.Enum):
    DEVICE_PERSON = ("device/person", 0)
    MACHINE_CREW = ("machine/crew", 1)
    SITE_UNIT = ("site-unit", 2)
    SITE = ("site", 3)
    SITE_OFFICE = ("site-office", 4)
    COMPANY = ("company", 5)
    NETWORK = ("network", 6)


AXES = {"aspect": Aspect, "phase": Phase, "level": Level}
GRID = (len(Aspect), len(Phase), len(Level))

_BY_TOKEN = {
    axis: {member.token: member for member in cls} for axis, cls in AXES.items()
}


class UnknownAxisValue(ValueError):
    def __init__(self, axis: str, token: str) -> None:
        super().__init__(f"unknown {axis} value '{token}'")
        self.axis = axis
        self.token = token


def parse_axis_value(axis: str, token: str) -> Aspect | Phase | Level:
    """Resolve a canonical token on the given axis; matching is case-sensitive."""
    try:
        return _BY_TOKEN[axis][token]
    except KeyError:
        raise UnknownAxisValue(axis, token) from None


class Cell(NamedTuple):
    """One grid cell, addressed by the three axis ordinals."""

    aspect: int
    phase: int
    level: int


@dataclass(frozen=True)
class Cuboid:
    """An axis-aligned box with inclusive bounds on all three axes."""

    aspect_from: Aspect
    aspect_to: Aspect
    phase_from: Phase
    phase_to: Phase
    level_from: Level
    level_to: Level

    def inverted_axes(self) -> list[str]:
        inverted = []
        if self.aspect_from.ordinal > self.aspect_to.ordinal:
            inverted.append("aspect")
        if self.phase_from.ordinal > self.phase_to.ordinal:
            inverted.append("phase")
        if self.level_from.ordinal > self.level_to.ordinal:
            inverted.append("level")
        return inverted


@dataclass(frozen=True)
class Volumetric:
    """An ordered list of cuboids; the cell set is their union."""

    cuboids: tuple[Cuboid, ...] = ()


def cuboid_cells(cuboid: Cuboid) -> set[Cell]:
    """All cells inside the cuboid; empty when any range is inverted."""
    return {
        Cell(a, p, l)
        for a in range(cuboid.aspect_from.ordinal, cuboid.aspect_to.ordinal + 1)
        for p in range(cuboid.phase_from.ordinal, cuboid.phase_to.ordinal + 1)
        for l in range(cuboid.level_from.ordinal, cuboid.level_to.ordinal + 1)
    }


def volumetric_cells(volumetric: Volumetric) -> set[Cell]:
    cells: set[Cell] = set()
    for cuboid in volumetric.cuboids:
        cells |= cuboid_cells(cuboid)
    return cells


def validate_volumetric(
    volumetric: Volumetric, path: str, line: int, col: int
) -> list[Diagnostic]:
    """E004 per cuboid with an inverted range, W103 per overlapping pair,
    W104 when the volumetric covers no cell at all."""
    diagnostics: list[Diagnostic] = []
    for index, cuboid in enumerate(volumetric.cuboids, start=1):
        inverted = cuboid.inverted_axes()
        if inverted:
            diagnostics.append(
                Diagnostic(
                    "E004",
                    f"cuboid {index} has an inverted range on the "
                    f"{' and '.join(inverted)} axis",
                    path,
                    line,
                    col,
                )
            )
    cell_sets = [cuboid_cells(c) for c in volumetric.cuboids]
    for i in range(len(cell_sets)):
        for j in range(i + 1, len(cell_sets)):
            shared = len(cell_sets[i] & cell_sets[j])
            if shared:
                diagnostics.append(
                    Diagnostic(
                        "W103",
                        f"cuboids {i + 1} and {j + 1} overlap in {shared} cell(s)",
                        path,
                        line,
                        col,
                    )
                )
    if not volumetric_cells(volumetric):
        diagnostics.append(
            Diagnostic(
                "W104", "volumetric does not cover any cell", path, line, col
            )
        )
    return diagnostics
