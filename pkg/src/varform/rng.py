"""Deterministic random-stream derivation.

Every random draw in the package flows from a single 64-bit master seed.
Substreams are derived from (master_seed, tag, index) triples, so results
do not depend on execution order or thread scheduling.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

_MAX_SEED = 2**64


def _tag_to_int(tag: str) -> int:
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class RngSpec:
    """A master seed plus the pure substream-derivation rule."""

    master_seed: int

    def __post_init__(self) -> None:
        if not isinstance(self.master_seed, (int, np.integer)) or not (
            0 <= self.master_seed < _MAX_SEED
        ):
            raise ConfigurationError(
                f"master seed must be a 64-bit unsigned integer, got {self.master_seed!r}"
            )

    def stream(self, tag: str, index: int = 0) -> np.random.Generator:
        """Independent generator for the (seed, tag, index) triple.

        Identical triples yield identical streams; streams for distinct
        triples never share state, so draws from one never affect another.
        """
        seq = np.random.SeedSequence((self.master_seed, _tag_to_int(tag), index))
        return np.random.default_rng(seq)

    def derive(self, tag: str, index: int = 0) -> int:
        """Derive a child master seed, for handing a whole stream family down."""
        seq = np.random.SeedSequence((self.master_seed, _tag_to_int(tag), index))
        return int(seq.generate_state(1, np.uint64)[0])

    @classmethod
    def coerce(cls, seed: "int | RngSpec") -> "RngSpec":
        if isinstance(seed, RngSpec):
            return seed
        if not isinstance(seed, (int, np.integer)):
            raise ConfigurationError(f"seed must be an integer, got {seed!r}")
        return cls(int(seed))
