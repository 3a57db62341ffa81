"""
Totally symmetric irreps of SU(n): construction, Cartan–Weyl factoring,
emulation on discrete harmonic oscillators, and quantum expanders.
"""

__version__ = "0.1.0"
