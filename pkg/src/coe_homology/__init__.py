"""Exact homology transfer along continuous orbit equivalences of finite group actions."""

__version__ = "0.1.0"
