"""Walsh coefficients of smooth functions: formulas, weight functions and decay bounds."""

__version__ = "0.1.0"
