"""Desk-scale laboratory for additive structure in polynomial values at
prime arguments: residue-restricted parameter construction, weighted prime
measures on Z_N, Fourier/Bohr-set machinery, and solution counting."""

__version__ = "0.1.0"
