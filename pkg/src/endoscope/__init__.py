"""Exact verification of character identities for simple supercuspidal representations
of GL_N over an unramified quadratic extension and of unitary groups."""

from __future__ import annotations

__version__ = "0.1.0"
