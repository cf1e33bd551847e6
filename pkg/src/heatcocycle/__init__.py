"""Exact symbolic engine for heat-operator traces and index cocycles on the flat torus."""

__version__ = "0.1.0"
