import hashlib
import struct


def hash64(*parts: int) -> int:
    """Stable 64-bit seed from integers (blake2b over their little-endian encoding)"""
    data = b"".join(struct.pack("<q", int(p)) for p in parts)
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def trial_seed(master_seed: int, sweep_index: int, trial: int) -> int:
    return hash64(master_seed, sweep_index, trial)
