"""Shard sets on disk: one GRNK file per machine plus manifest.json"""

from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, Field

from ..blackboard import PsdShard
from ..exceptions import DimensionMismatchError, MatrixFormatError
from ..spectra import read_matrix, write_matrix

MANIFEST_NAME = "manifest.json"


class ShardManifest(BaseModel):
    generator: str
    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    seed: int
    files: List[str]
    config: Dict[str, Any] = Field(default_factory=dict)
    planted_rank: int = -1


def shard_file_name(index: int) -> str:
    return f"shard_{index:03d}.grnk"


def write_shard_set(
    out_dir: Union[str, Path],
    shards: List[PsdShard],
    generator: str,
    seed: int,
    config: Dict[str, Any] = None,
    planted_rank: int = -1,
) -> ShardManifest:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for shard in sorted(shards, key=lambda s: s.machine_index):
        name = shard_file_name(shard.machine_index)
        write_matrix(out_dir / name, shard.matrix)
        files.append(name)
    manifest = ShardManifest(
        generator=generator,
        n=shards[0].n,
        m=len(shards),
        seed=seed,
        files=files,
        config=config or {},
        planted_rank=planted_rank,
    )
    (out_dir / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2))
    return manifest


def read_shard_set(path: Union[str, Path]) -> Tuple[List[PsdShard], ShardManifest]:
    path = Path(path)
    manifest_path = path / MANIFEST_NAME
    if not manifest_path.exists():
        raise MatrixFormatError(f"{path} has no {MANIFEST_NAME}")
    manifest = ShardManifest.model_validate_json(manifest_path.read_text())
    shards = read_shard_files([path / name for name in manifest.files])
    if shards[0].n != manifest.n:
        raise DimensionMismatchError(f"manifest says n={manifest.n}, files hold n={shards[0].n}")
    return shards, manifest


def read_shard_files(paths: List[Union[str, Path]]) -> List[PsdShard]:
    """Shards numbered 1..m in the order the files are given"""
    return [PsdShard(i, read_matrix(p)) for i, p in enumerate(paths, start=1)]
