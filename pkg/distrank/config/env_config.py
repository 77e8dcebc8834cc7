from pathlib import Path
from typing import Optional
import structlog
from dotenv import load_dotenv

logger = structlog.get_logger()


def load_environment(env_path: Optional[Path] = None) -> bool:
    """Load DISTRANK_* overrides from a .env file if one exists"""
    env_path = env_path or Path(__file__).parent.parent.parent / ".env"

    if env_path.exists():
        load_dotenv(env_path)
        logger.debug("environment_loaded", env_file=str(env_path))
        return True

    logger.debug("no_env_file", env_file=str(env_path))
    return False
