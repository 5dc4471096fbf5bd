"""Brute-force checks of the closed forms with random points over GF(p)."""
