"""Finite-instance verification workbench for module categories over
finite rings: exhaustive checks of monad laws, commutativity, Fubini
identities, dualization, and completion constructions at desk scale."""

__version__ = "0.1.0"
