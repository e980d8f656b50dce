"""Degenerations of the Ruijsenaars-van Diejen operator, the q-Heun equation and Lax-pair links."""
__version__ = "0.1.0"
