"""Bundled model data."""
