"""Entanglement detection and quantification from covariance matrices."""

__version__ = "0.1.0"
