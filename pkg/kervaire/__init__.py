"""
Kervaire semi-characteristic of triangulated manifolds, the Clifford circle
index ind2 and checks of the counting and cut-and-paste formulas.
"""

__version__ = '1.0.0'
