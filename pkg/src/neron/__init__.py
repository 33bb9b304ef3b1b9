"""Constructive Néron desingularization over local algebras with big smooth locus."""
from neron.polyring import (  # noqa: F401
    QQ, GF, FieldSpec, Jet, MonomialOrder, Poly, Ring, VarBlock, parse_poly, format_poly,
)

__version__ = "0.1.0"
