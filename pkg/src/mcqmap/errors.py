"""Exception hierarchy shared across the toolkit."""


class MapperError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(MapperError):
    """Malformed circuit, topology, allocation, or CLI argument."""


class InfeasibleError(MapperError):
    """Instance cannot be solved under capacity/colocation constraints."""


class OracleGuardError(MapperError):
    """Instance exceeds the exact solver's size guard."""
