"""Agent pipeline that turns natural-language optimization problems into
solved linear and mixed-integer programs."""

from .config import PipelineConfig, build_client
from .errors import LpAgentError

__version__ = "0.1.0"

__all__ = ["LpAgentError", "PipelineConfig", "build_client", "__version__"]
