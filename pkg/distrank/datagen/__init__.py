"""Instance generators: spiked covariance, planted spectra and orthogonal ensembles"""

from .ensemble import haar_orthogonal, haar_frame, orthogonal_ensemble_pair
from .planted import planted_spectrum_shards, step_spectrum
from .spiked import SpikedCovConfig, spiked_covariance_shards
from .shardset import ShardManifest, write_shard_set, read_shard_set, read_shard_files

__all__ = [
    'haar_orthogonal', 'haar_frame', 'orthogonal_ensemble_pair',
    'planted_spectrum_shards', 'step_spectrum',
    'SpikedCovConfig', 'spiked_covariance_shards',
    'ShardManifest', 'write_shard_set', 'read_shard_set', 'read_shard_files',
]
