"""Handcrafted-feature pipeline for real-vs-synthetic image detection."""

__version__ = "0.1.0"
