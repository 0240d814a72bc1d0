"""Compatible complex structures, Siegel domains and twistor spaces, numerically."""

__version__ = "0.1.0"
