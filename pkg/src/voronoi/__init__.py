"""Voronoi cell and diagram construction."""
