"""Exact erosion distances for rank invariants of generalized persistence modules."""

__version__ = "0.1.0"
