"""Conformally invariant measure on Delaunay triangulations."""
