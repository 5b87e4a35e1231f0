"""Graph braid groups, cube complexes and right-angled Artin groups.

Builds reduced configuration spaces of graphs, the cubed tori of RAAGs and
the cubical map between them, checks the combinatorial link conditions that
certify local isometry, and decides the word and conjugacy problems in
right-angled Artin groups with replayable move certificates.
"""

__version__ = "0.1.0"


class CubistError(Exception):
    """Base class for errors raised by this package."""


class InputError(CubistError, ValueError):
    """Malformed input: bad graph, unknown vertex, unparsable word."""


class BudgetExceeded(CubistError):
    """An enumeration went past its configured budget."""
