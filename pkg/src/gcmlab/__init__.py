"""Shape-constrained estimation under dependence: convex minorants, estimators, limits."""

__version__ = "0.1.0"
