"""Rigid foldability of flat-foldable quadrivalent crease patterns."""

__version__ = "0.1.0"
