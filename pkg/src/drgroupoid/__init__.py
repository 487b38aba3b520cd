"""Primitive-ideal catalogues for C*-algebras of Deaconu-Renault groupoids of
finite N^k systems and finite graphs, with numerical certificates."""

__version__ = "0.1.0"
