"""Planar geometry primitives and convex polygon operations."""
