"""Byte-substitution encryption from machine trajectory endpoints.

Each plaintext byte is mapped to an initial x value, the machine is run for
N steps, and the final x is the ciphertext value for that byte. The receiver
rebuilds the same 256-entry codebook with the shared key and inverts by
exact bit match.

This is a deterministic substitution cipher at the byte level: equal bytes
produce equal ciphertext values, so frequency analysis and known-plaintext
attacks apply. It is an educational construction, not a secure cipher.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import rossler
from .errors import AmbiguousError, DivergenceError, FormatError, NoMatchError

if TYPE_CHECKING:
    from .keys import RosslerKey

CIPHERTEXT_MAGIC = b"RCT1"
CIPHERTEXT_VERSION = 1


def map_byte(b: int) -> float:
    """Initial x value for byte b: (b + 1) / 1024.

    Exactly representable in binary64, injective, range (0, 0.25].
    """
    if not 0 <= b <= 255:
        raise ValueError(f"byte out of range: {b}")
    return (b + 1) / 1024.0


_BYTE_X0S = np.array([(b + 1) / 1024.0 for b in range(256)])


@dataclass(frozen=True)
class Codebook:
    """Trajectory endpoint (x component) per plaintext byte."""

    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (256,):
            raise ValueError("codebook must have exactly 256 entries")


@dataclass(frozen=True)
class Ciphertext:
    """Ordered endpoint values, one per plaintext byte."""

    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def build_codebook(key: RosslerKey, *, workers: int = 1) -> Codebook:
    """Run the machine once per byte value and collect the final x values.

    Raises DivergenceError (with .entry = the byte and .step) if any run
    goes non-finite; validated keys never do.
    """
    params = rossler.SystemParams(key.a, key.b, key.c)
    finals = rossler.run_machine_batch(
        params, _BYTE_X0S, key.y0, key.z0, key.n_steps, key.h, workers=workers
    )
    return Codebook(entries=finals[:, 0].copy())


def encrypt(plaintext: bytes, key: RosslerKey, *, workers: int = 1) -> Ciphertext:
    """Substitute each plaintext byte with its codebook endpoint."""
    codebook = build_codebook(key, workers=workers)
    if len(plaintext) == 0:
        return Ciphertext(values=np.empty(0, dtype=np.float64))
    indices = np.frombuffer(plaintext, dtype=np.uint8)
    return Ciphertext(values=codebook.entries[indices].copy())


def decrypt(
    ct: Ciphertext,
    key: RosslerKey,
    *,
    tolerance: float | None = None,
    workers: int = 1,
) -> bytes:
    """Invert the codebook substitution.

    Exact mode (tolerance None, the default): each value must bit-match a
    codebook entry. Sound because both sides run identical deterministic
    arithmetic.

    Tolerant mode (tolerance = eps): the nearest entry wins if it is within
    eps and the second-nearest is more than eps away. Meant only for
    ciphertext that crossed a lossy decimal re-encoding; unreliable for
    large step counts.
    """
    values = ct.values
    if values.size and not np.isfinite(values).all():
        pos = int(np.flatnonzero(~np.isfinite(values))[0])
        raise FormatError(f"non-finite ciphertext value at position {pos}")
    codebook = build_codebook(key, workers=workers)
    if tolerance is None:
        by_bits = {
            struct.pack("<d", float(v)): b for b, v in enumerate(codebook.entries)
        }
        out = bytearray(values.size)
        for i, v in enumerate(values):
            b = by_bits.get(struct.pack("<d", float(v)))
            if b is None:
                raise NoMatchError(i)
            out[i] = b
        return bytes(out)
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    out = bytearray(values.size)
    for i, v in enumerate(values):
        dist = np.abs(codebook.entries - v)
        nearest = int(np.argmin(dist))
        d_sorted = np.partition(dist, 1)
        if d_sorted[0] > tolerance:
            raise NoMatchError(i)
        if d_sorted[1] <= tolerance:
            raise AmbiguousError(i)
        out[i] = nearest
    return bytes(out)


def serialize_ciphertext(ct: Ciphertext) -> bytes:
    """RCT1 wire form: magic, version byte, u64 count, count big-endian doubles."""
    header = CIPHERTEXT_MAGIC + struct.pack(">BQ", CIPHERTEXT_VERSION, len(ct))
    return header + ct.values.astype(">f8").tobytes()


def deserialize_ciphertext(data: bytes) -> Ciphertext:
    """Parse the RCT1 form; FormatError on any structural mismatch."""
    if len(data) < 13:
        raise FormatError(f"ciphertext too short: {len(data)} bytes")
    if data[:4] != CIPHERTEXT_MAGIC:
        raise FormatError("bad ciphertext magic")
    version, count = struct.unpack(">BQ", data[4:13])
    if version != CIPHERTEXT_VERSION:
        raise FormatError(f"unsupported ciphertext version {version}")
    if len(data) != 13 + 8 * count:
        raise FormatError(
            f"ciphertext length {len(data)} does not match count {count}"
        )
    values = np.frombuffer(data[13:], dtype=">f8").astype(np.float64)
    if values.size and not np.isfinite(values).all():
        pos = int(np.flatnonzero(~np.isfinite(values))[0])
        raise FormatError(f"non-finite ciphertext value at position {pos}")
    return Ciphertext(values=values)
