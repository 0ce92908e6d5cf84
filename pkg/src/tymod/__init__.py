"""Module categories over Tambara-Yamagami categories, computed exactly."""

__version__ = "0.1.0"
