"""Error taxonomy shared across the engine.

InputError maps to CLI exit code 1, BackendError to exit code 2.
"""


class VideoFoleyError(Exception):
    """Base class for engine errors."""


class InputError(VideoFoleyError):
    """Bad user input: missing files, malformed manifests, invalid selections."""


class BackendError(VideoFoleyError):
    """An embedding or saliency backend failed or cannot serve a request."""
