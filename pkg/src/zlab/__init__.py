"""Numerical toolkit for Lerch zeta functions and the Green functions built from them."""

from __future__ import annotations

__version__ = "0.1.0"
