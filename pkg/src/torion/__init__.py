"""torion: exact-arithmetic torus-translate scans in G_m^n, Weil heights,
cross-ratio/stable-form condition generators, and Kirchhoff networks for
cylinder moduli."""

__version__ = "0.1.0"
