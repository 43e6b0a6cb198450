"""ym2d: verification-grade numerics for (2+1)D Yang-Mills in Lorenz gauge.

Layers: Lie algebra tensors (algebra), periodic pseudospectral fields and
plane-wave symbolic fields (spectral, planewave), null forms and symbols
(nullforms), the reformulated field equations and constraints (ym),
algebraic identity checks (identities), time evolution in second-order and
half-wave form (evolve), symbol/estimate sampling (estimates), and a CLI
(cli).
"""

__version__ = "0.1.0"
