"""
Far-field prediction from near-field acoustic measurements
"""

__version__ = "1.0.0"
