"""Eigenvalue transformation toolkit for normal matrices and commuting families."""

__version__ = "0.1.0"
__title__ = "MQET"
