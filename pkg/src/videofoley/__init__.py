"""Video-to-sound matching: scene splitting, clip ranking, sync, and spatial mixdown."""

from videofoley.errors import BackendError, InputError, VideoFoleyError

__version__ = "0.1.0"

__all__ = ["VideoFoleyError", "InputError", "BackendError", "__version__"]
