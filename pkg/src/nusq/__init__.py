"""Sums of three nonunit squares: decision procedures, ternary quadratic
form representation counts, genus identities, and polygonal number
decompositions, with sieve-based reproduction of all exceptional sets."""

__version__ = "0.1.0"
