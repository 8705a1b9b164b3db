"""
ibplane: information-plane curves and perturbation bounds for the
information bottleneck on discrete joints.

Usage:
    ibplane curve joint.csv --objective squared-ib -o plane.csv
    ibplane analytic joint.csv --talpha-grid 11 -o talpha.csv
    ibplane verify joint.csv --theorems all -o bounds.csv
    ibplane demo
    ibplane config
"""

__version__ = "0.1.0"
