"""Exception types raised by freemass."""


class FreemassError(Exception):
    """Base class for all freemass errors."""


class NormalizationError(FreemassError, ValueError):
    """A state is not normalizable, or a reduction produced zero weight."""


class InvalidSchemeError(FreemassError, ValueError):
    """A measurement-scheme descriptor violates its invariants."""


class SmallQValidityError(InvalidSchemeError):
    """The small-displacement radiation-pressure model was used outside its regime."""


class NotPlausibleError(FreemassError, ValueError):
    """An (a, b, c, d) matrix does not satisfy a = c = 1."""


class GridError(FreemassError, ValueError):
    """A wavefunction does not fit its grid (box or Nyquist band)."""


class ConfigError(FreemassError, ValueError):
    """Invalid run configuration."""
