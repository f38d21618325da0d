"""Named benchmark instances: the four database/target-set presets."""

from __future__ import annotations

PRESETS: dict[str, tuple[int, tuple[str, ...]]] = {
    "2q2t": (2, ("00", "01")),
    "5q2t": (5, ("00101", "10111")),
    "5q4t": (5, ("10001", "01011", "11101", "10110")),
    "6q3t": (6, ("100010", "110011", "111010")),
}


def preset_instance(name: str) -> tuple[int, tuple[str, ...]]:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown preset {name!r}; available: {known}") from None
