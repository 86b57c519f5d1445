"""Interaction-aware refinement of multi-person 3D pose estimates."""

from .exception import PiNetError

__all__ = [
    "PiNetError",
]
