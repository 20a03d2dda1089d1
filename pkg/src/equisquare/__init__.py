"""Exact counting, sampling and algebra for equi-n-squares.

An equi-n-square is an n x n grid holding each of 1..n exactly n times; it
is consecutive when some row or column reads 1..n or n..1.
"""

__version__ = "0.1.0"
