"""
Utils module
"""

from geoint.utils.logging import GeoLogger, get_logger

__all__ = ["GeoLogger", "get_logger"]
