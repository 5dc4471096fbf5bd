"""Picard lattice, point models and cones of the blow-up of P^2 at r points."""
