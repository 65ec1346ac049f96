"""Simulation toolkit for unequal error protection in 5G-style channel codes,
approximate web/video transmission, and base-station encoder scheduling."""

__version__ = "0.1.0"
