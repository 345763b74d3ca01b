"""Engine and resize-policy parameters."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class OramConfig:
    """Tunable parameters of the block engine.

    z: block slots per bucket.
    segment_size: payload bytes per block; also the file chunking unit.
    stash_max: soft limit on stash occupancy before background eviction.
    group_size: segments fetched together through a single path access.
    rng_seed: optional seed for the leaf-sampling RNG (deterministic tests).
    """

    z: int = 3
    segment_size: int = 65536
    stash_max: int = 100
    group_size: int = 3
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        if self.z < 1:
            raise ValueError(f"z must be >= 1, got {self.z}")
        if self.segment_size < 1024:
            raise ValueError(f"segment_size must be >= 1024, got {self.segment_size}")
        if self.stash_max < 1:
            raise ValueError(f"stash_max must be >= 1, got {self.stash_max}")
        if self.group_size < 1:
            raise ValueError(f"group_size must be >= 1, got {self.group_size}")


@dataclass(frozen=True)
class ResizePolicy:
    """Utilization thresholds driving automatic tree growth and shrinkage.

    The tree grows when utilization rises above ``grow_threshold`` and
    shrinks when it falls below ``shrink_threshold``; both move utilization
    back toward ``target``.
    """

    shrink_threshold: float = 0.45
    target: float = 0.50
    grow_threshold: float = 0.55

    def __post_init__(self) -> None:
        if not (0.0 < self.shrink_threshold < self.target < self.grow_threshold < 1.0):
            raise ValueError(
                "thresholds must satisfy 0 < shrink < target < grow < 1, got "
                f"shrink={self.shrink_threshold} target={self.target} "
                f"grow={self.grow_threshold}"
            )
