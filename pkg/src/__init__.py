"""Fat point resolution toolkit: Hilbert functions, resolutions and maximal rank for fat points in P^2."""

__version__ = "0.1.0"
