"""Exact-arithmetic classification of chiral WZW models.

Modules:
    latmath    -- integer/rational lattice linear algebra (HNF, SNF, quotients)
    rootsys    -- root systems A-G up to rank 8, Weyl data, centers
    spectrum   -- level-k alcoves, sharp corners, minimal energies, spins
    cohomology -- H^4(BG,Z) as even forms on the integral lattice
    extension  -- simple-current extensions, the (G,k) <-> model bijection
    fusion     -- Freudenthal multiplicities and Kac-Walton fusion at low rank
    cli        -- `wzw` command-line interface
"""

__version__ = "1.0.0"

from .rootsys import SimpleType, build  # noqa: F401
