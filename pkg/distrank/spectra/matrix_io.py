"""GRNK matrix files.

Binary layout: magic b"GRNK", version u16, n u64 (little endian), then n*n
little-endian float64 entries in row-major order. The plain-text variant has n
on the first line followed by n lines of n space-separated decimals.
"""

import struct
from pathlib import Path
from typing import Literal, Union

import numpy as np

from ..exceptions import MatrixFormatError
from .linalg import SymMatrix

MAGIC = b"GRNK"
VERSION = 1
_HEADER = struct.Struct("<4sHQ")


def encode_matrix(A: SymMatrix) -> bytes:
    body = np.ascontiguousarray(A.entries, dtype="<f8").tobytes(order="C")
    return _HEADER.pack(MAGIC, VERSION, A.n) + body


def decode_matrix(data: bytes) -> SymMatrix:
    if len(data) < _HEADER.size:
        raise MatrixFormatError("truncated header")
    magic, version, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MatrixFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise MatrixFormatError(f"unsupported version {version}")
    expected = _HEADER.size + 8 * n * n
    if len(data) != expected:
        raise MatrixFormatError(f"expected {expected} bytes for n={n}, got {len(data)}")
    entries = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(n, n)
    return SymMatrix(entries.astype(np.float64))


def parse_text_matrix(text: str) -> SymMatrix:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise MatrixFormatError("empty text matrix")
    try:
        n = int(lines[0].strip())
        rows = [[float(tok) for tok in line.split()] for line in lines[1:]]
    except ValueError as e:
        raise MatrixFormatError(f"unparseable text matrix: {e}") from e
    if len(rows) != n or any(len(row) != n for row in rows):
        raise MatrixFormatError(f"text matrix is not {n}x{n}")
    return SymMatrix(np.array(rows, dtype=np.float64))


def format_text_matrix(A: SymMatrix) -> str:
    lines = [str(A.n)]
    lines.extend(" ".join(repr(float(x)) for x in row) for row in A.entries)
    return "\n".join(lines) + "\n"


def read_matrix(path: Union[str, Path]) -> SymMatrix:
    """Read either format; binary files are recognised by their magic"""
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        return decode_matrix(data)
    try:
        return parse_text_matrix(data.decode("ascii"))
    except UnicodeDecodeError as e:
        raise MatrixFormatError(f"{path}: neither GRNK binary nor text") from e


def write_matrix(path: Union[str, Path], A: SymMatrix, fmt: Literal["binary", "text"] = "binary") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "binary":
        path.write_bytes(encode_matrix(A))
    else:
        path.write_text(format_text_matrix(A))
    return path
