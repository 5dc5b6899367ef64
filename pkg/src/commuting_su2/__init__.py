"""K-theory and integral cohomology of Hom(Z^n, SU(2)) and its blowup."""

__version__ = "0.1.0"
