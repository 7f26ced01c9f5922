class WoundError(Exception):
    """Base class for every computation-level failure raised by wound-flow."""
    pass


class ParameterError(WoundError):
    """The caller handed in parameters that do not describe a valid computation."""
    pass
