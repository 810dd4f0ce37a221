"""Size bounds shared by the exhaustive searches."""

from __future__ import annotations

from dataclasses import dataclass


class BoundExceeded(ValueError):
    """An input is larger than the configured search bound."""

    def __init__(self, name: str, value: int, bound: int):
        super().__init__(f"{name} = {value} exceeds configured bound {bound}")
        self.name = name
        self.value = value
        self.bound = bound


@dataclass(frozen=True)
class Bounds:
    subgroup_order: int = 64
    holomorph_order: int = 2000
    brace_order: int = 64
    census_order: int = 8
    perm_group_order: int = 40320
    iso_points: int = 10
    basic_oracle_points: int = 6
    bruteforce_points: int = 4
    completeness_points: int = 3
    max_points: int = 12

    def check(self, name: str, value: int) -> None:
        bound = getattr(self, name)
        if value > bound:
            raise BoundExceeded(name, value, bound)


DEFAULT_BOUNDS = Bounds()
