"""Theta series of selfdual lattices and spherical design strengths of their shells."""

from __future__ import annotations

__version__ = "0.1.0"
