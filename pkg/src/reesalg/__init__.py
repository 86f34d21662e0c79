"""Cohen-Macaulayness of blow-up algebras over prime fields."""

__version__ = "0.1.0"
