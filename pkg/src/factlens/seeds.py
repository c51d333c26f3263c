"""Deterministic sub-seed derivation.

One run seed drives every stochastic component. Each component draws its
own RNG from ``derive_seed(seed, name)`` so streams stay independent and
reproducible across platforms (SHA-256 is the portable mixer; the
generators built on top are numpy PCG64 via ``np.random.default_rng``).
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, component: str) -> int:
    """Derive a stable 63-bit sub-seed for a named component."""
    digest = hashlib.sha256(f"{seed}:{component}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)
