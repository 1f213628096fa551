"""Local cohomology, spectral sequences and Gorenstein duality for the
RO(Q)-graded coefficients of BPR<n> over the group Q of order two."""

__version__ = "1.0.0"
