"""R-groups and elliptic constituents for p-adic similitude groups."""

__version__ = "0.1.0"
