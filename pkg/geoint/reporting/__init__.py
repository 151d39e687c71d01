"""
Reporting module
"""

from geoint.reporting.generator import Report, ReportGenerator

__all__ = ["Report", "ReportGenerator"]
