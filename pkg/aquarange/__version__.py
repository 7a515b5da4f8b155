"""Current version of aquarange."""

__version__ = "0.1.0"
