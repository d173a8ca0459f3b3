"""Deterministic seed derivation.

Every random stream in the pipeline is its own random.Random seeded from a
sha256 hash of (master seed, table id, slot, purpose), so enabling one
branch or re-ordering work units never shifts another stream's draws.
"""
from __future__ import annotations

import hashlib
import random


def derive_seed(*parts) -> int:
    joined = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(joined.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
