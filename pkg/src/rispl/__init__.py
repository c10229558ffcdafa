"""Free-space path loss modelling for RIS-assisted wireless links."""

__version__ = "0.1.0"
