"""
uniwkb — uniform asymptotic approximation for the 1-D / radial Schrödinger equation.
"""
__version__ = "0.1.0"
