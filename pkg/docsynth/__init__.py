"""Synthetic degraded handwritten-document datasets and binarization scoring."""

__version__ = "0.1.0"
