"""Signal-carrier substrates, intrinsic radar frames, causal order and singlet statistics."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
