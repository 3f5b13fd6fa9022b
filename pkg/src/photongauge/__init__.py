"""Berry-gauge representation of the photon in momentum space."""

__version__ = "0.1.0"
