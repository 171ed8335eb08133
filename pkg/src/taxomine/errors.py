"""Exception hierarchy shared by the pipeline stages.

The CLI maps these onto exit codes: InputError -> 2, InternalError -> 3.
"""


class TaxomineError(Exception):
    """Base class for all taxomine failures."""


class InputError(TaxomineError):
    """Unusable input: missing file, bad format, version mismatch."""


class InternalError(TaxomineError):
    """An internal invariant was violated; indicates a bug, not bad input."""
