__all__ = [
    # submodules
    "cascade",
    "cli",
    "config",
    "metrics",
    "optimizer",
    "output",
    "scene",
    "signal",
    "sweep",
    "trends",
    "units",
    "utils",
    "verify",
    # aliases
    "ChannelSet",
    "PhaseConfig",
    "RunConfig",
    "Scene",
    "SystemParams",
    "evaluate",
    "generate_channels",
    "load_config",
    "optimize_partitioned",
    "run_sweep",
]
__version__ = "0.1.0"


# submodules
from . import units
from . import utils
from . import scene
from . import cascade
from . import metrics
from . import optimizer
from . import signal
from . import sweep
from . import config
from . import output
from . import trends
from . import verify
from . import cli


# aliases
from .cascade import PhaseConfig
from .config import RunConfig, load_config
from .metrics import evaluate
from .optimizer import optimize_partitioned
from .scene import ChannelSet, Scene, SystemParams, generate_channels
from .sweep import run_sweep
