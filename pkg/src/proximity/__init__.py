"""Distances, the proximity relation and proximal regions between cells."""
