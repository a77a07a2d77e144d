"""Exact interval sets, fat Cantor sets, one-sided densities and staged
Lipschitz constructions.

Rationals are ``fractions.Fraction``; ints and ``"p/q"`` strings are accepted
as input. Interval sets are lists of ``(lo, hi)`` pairs. Oracles are either
such a list or an oracle document as produced by ``cantor_oracle``.
"""

from ._lipsetlab import (
    NotFoundError,
    ParseError,
    ResourceError,
    bounds,
    build,
    cantor_oracle,
    cantor_params,
    cantor_stage,
    certificate_check,
    complement_in,
    difference,
    egd_member,
    gaps,
    intersection,
    limit,
    lip,
    measure,
    measure_in,
    mf,
    normalize,
    pack,
    pl_eval,
    realize,
    run_acceptance,
    side_density,
    sup_norm_diff,
    symdiff_measure,
    union,
    verify,
    wnd_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
