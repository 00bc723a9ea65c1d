"""Short rainbow cycles in graphs whose color classes are 2-matchings."""

__version__ = "0.1.0"
