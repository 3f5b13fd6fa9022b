"""Exception types raised by photongauge."""


class PhotonGaugeError(Exception):
    """Base class for all errors raised by the toolkit."""


class ZeroWaveVectorError(PhotonGaugeError, ValueError):
    """The wavevector vanishes, so the propagation direction is undefined."""


class DiracStringError(PhotonGaugeError, ValueError):
    """A momentum point lies on (or too close to) the Dirac string w = +-I."""


class GaugeNormError(PhotonGaugeError, ValueError):
    """A gauge vector is not of unit length."""


class GridMismatchError(PhotonGaugeError, ValueError):
    """Two fields live on different momentum grids."""


class GaugeMismatchError(PhotonGaugeError, ValueError):
    """Two spinor fields are expressed in different gauges."""


class RepresentationError(PhotonGaugeError, TypeError):
    """An operation received a field of the wrong representation."""


class BoundaryDecayError(PhotonGaugeError, ValueError):
    """A field does not decay at the grid boundary, so derivatives are unreliable."""


class StringClearanceError(PhotonGaugeError, ValueError):
    """A beam's momentum support comes too close to the Dirac string of its gauge."""


class GridCoverageError(PhotonGaugeError, ValueError):
    """The momentum grid is too small for the requested beam."""


class ConfigError(PhotonGaugeError, ValueError):
    """An experiment configuration file is invalid."""
