from .env_config import load_environment
from .settings import DistRankSettings, get_settings
from .descriptors import QuantizationConfig, RunDescriptor, ExperimentConfig, ShardFiles

__all__ = [
    'load_environment', 'DistRankSettings', 'get_settings',
    'QuantizationConfig', 'RunDescriptor', 'ExperimentConfig', 'ShardFiles',
]
