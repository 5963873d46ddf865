"""Stable derivation of independent RNG seeds from a base seed.

Work units that may run concurrently (per-run simulation, per-day training)
each get their own seed derived with :func:`derive_seed`, so concurrent and
serial execution consume independent streams and produce identical results.

The mixing function is splitmix64: each index is folded into the state with
the 64-bit golden-ratio increment and passed through the two xor-multiply
finalization rounds. It is fixed; changing it would silently change every
seeded artifact in the pipeline.
"""

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> int:
    z = (state + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Mix ``base`` with any number of integer indices into a fresh 64-bit seed."""
    state = base & _MASK
    for index in indices:
        state = _splitmix64((state + index) & _MASK)
    return _splitmix64(state)
