"""Version information for the Turán lab."""

__version__ = "0.1.0"
