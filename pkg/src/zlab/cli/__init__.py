"""Command-line front end; the entry point lives in ``zlab.cli.main``."""

from __future__ import annotations

from .table import ScanTable

__all__ = ["ScanTable"]
