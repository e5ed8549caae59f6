"""
One-way quantum computing toolkit: cluster states, measurement gadgets,
circuit compilation and percolation estimates
"""

__version__ = "1.0.0"
