"""Centroidal Voronoi tessellation with optional image-derived density."""
