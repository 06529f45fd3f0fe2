"""Deterministic seed derivation.

Every stochastic component in the project (spawn shuffles, agent search,
tuner games) draws from a ``random.Random`` seeded through ``derive_seed``,
so any run is reproducible from a single top-level seed. Python's builtin
``hash`` is salted per process and must never be used here.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts: int | str) -> int:
    """Mix an arbitrary tuple of ints/strings into a stable 64-bit seed."""
    h = hashlib.sha256()
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big")


def spawn_rng(*parts: int | str) -> random.Random:
    """A fresh generator seeded from the given derivation path."""
    return random.Random(derive_seed(*parts))
