"""Test utilities package"""

from .graph_factory import GraphFactory

__all__ = ["GraphFactory"]
