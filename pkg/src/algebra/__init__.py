"""Cohomology, resolutions, maximal rank and Cremona orbits of fat point ideals."""
