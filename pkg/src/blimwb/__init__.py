"""Workbench for dimension quotients and boundary limits over presentation categories."""

__version__ = "0.1.0"
