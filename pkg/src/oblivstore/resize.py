"""Dynamic tree growth and shrinkage at the leaf end.

The tree changes size one bucket at a time, driven by utilization
thresholds, so its footprint tracks the volume of live data. Growth
invalidates the new bucket's parent as a leaf and reassigns records pointing
at it; shrinkage dumps the removed bucket into the stash and truncates
affected paths. Resize events are visible to the server (bucket files
appear and disappear), which leaks only that total stored volume crossed a
threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import ResizePolicy
from .errors import CannotShrinkRootError
from .oram import PathOram


@dataclass
class ResizeReport:
    buckets_added: int = 0
    buckets_removed: int = 0
    remapped: int = 0

    @property
    def resized(self) -> bool:
        return self.buckets_added > 0 or self.buckets_removed > 0


class Resizer:
    """Applies a :class:`ResizePolicy` to a :class:`PathOram` engine."""

    def __init__(self, engine: PathOram, policy: ResizePolicy | None = None):
        self.engine = engine
        self.policy = policy or ResizePolicy()
        self.total_grown = 0
        self.total_shrunk = 0

    def maybe_resize(self) -> ResizeReport:
        """Grow above the grow threshold, shrink below the shrink threshold.

        Growth repeats until utilization is back at or below target;
        shrinkage repeats until utilization is back at or above target or
        only the root remains. In the band between the thresholds this is a
        no-op.

        A single pass can overshoot on a small tree (one bucket is a coarse
        step), so passes repeat until utilization settles inside the band.
        Whenever some tree size can satisfy the band, this terminates there;
        for live counts where no size can (a few blocks on a tiny tree), a
        revisited state stops the loop instead of ping-ponging forever.
        """
        report = ResizeReport()
        engine = self.engine
        seen: set[tuple[str, int]] = set()
        while True:
            utilization = engine.utilization()
            if utilization > self.policy.grow_threshold:
                direction = "grow"
            elif utilization < self.policy.shrink_threshold and engine.n_buckets > 1:
                direction = "shrink"
            else:
                break
            state = (direction, engine.n_buckets)
            if state in seen:
                break
            seen.add(state)
            if direction == "grow":
                while engine.utilization() > self.policy.target:
                    report.remapped += self.grow_one()
                    report.buckets_added += 1
            else:
                while engine.utilization() < self.policy.target and engine.n_buckets > 1:
                    report.remapped += self.shrink_one()
                    report.buckets_removed += 1
        return report

    def grow_one(self) -> int:
        """Append one bucket at the leaf end; returns how many records moved.

        The new bucket (index N) starts as sealed dummies. When it is a left
        child its parent was a leaf until now: everything mapped there is
        reassigned to the parent's only child, the new bucket. Old paths are
        prefixes of the new ones, so placement stays valid without touching
        the tree.
        """
        engine = self.engine
        new_index = engine.n_buckets
        engine.write_bucket(new_index, [])
        engine.n_buckets = new_index + 1
        self.total_grown += 1

        remapped = 0
        if new_index % 2 == 1:
            invalidated = (new_index - 1) // 2
            for block_id, leaf in engine.position_map.items():
                if leaf == invalidated:
                    engine.position_map[block_id] = new_index
                    if block_id in engine.stash:
                        engine.stash[block_id].leaf = new_index
                    remapped += 1
        return remapped

    def shrink_one(self) -> int:
        """Remove the last bucket; returns how many records moved.

        The removed bucket's real blocks are dumped into the stash. Records
        mapped to it are truncated to the deepest surviving bucket on their
        path: the parent when it becomes childless, otherwise the parent's
        remaining left child (whose path shares every surviving index).
        Runs the stash drain if the dump pushed it over the soft limit.
        """
        engine = self.engine
        if engine.n_buckets == 1:
            raise CannotShrinkRootError("cannot remove the root bucket")
        removed = engine.n_buckets - 1

        for blk in engine.read_bucket(removed):
            engine.stash[blk.block_id] = blk
        engine.backend.delete_bucket(removed)
        engine.n_buckets = removed
        self.total_shrunk += 1

        parent = (removed - 1) // 2
        if 2 * parent + 1 >= engine.n_buckets:
            target = parent
        else:
            target = 2 * parent + 1
        remapped = 0
        for block_id, leaf in engine.position_map.items():
            if leaf == removed:
                engine.position_map[block_id] = target
                if block_id in engine.stash:
                    engine.stash[block_id].leaf = target
                remapped += 1

        if len(engine.stash) > engine.config.stash_max:
            engine._drain_stash()
        return remapped
