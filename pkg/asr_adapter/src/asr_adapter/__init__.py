"""asr-adapter: batch label inference over audio+transcript manifests."""

from .engines import RuleEngine, WhisperEngine, create_engine
from .manifest import AdapterJob, ManifestError, ManifestRow, read_manifest
from .runner import RunStats, run_inference

__version__ = "0.1.0"

__all__ = [
    "AdapterJob",
    "ManifestError",
    "ManifestRow",
    "RuleEngine",
    "RunStats",
    "WhisperEngine",
    "create_engine",
    "read_manifest",
    "run_inference",
]
