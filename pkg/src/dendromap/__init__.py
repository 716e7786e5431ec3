"""Exact rational engines for a dendrite self-map.

Subpackages build on each other roughly bottom-up: ``rationals`` and
``words`` supply the arithmetic and symbolic layers, ``plmap``/``tau0``/
``tau12`` the interval maps, ``space`` the points, lengths and metric of the
dendrite, ``dynamics`` the map itself plus its certificates, ``cli`` the
command-line entry point.
"""

__version__ = "0.1.0"
