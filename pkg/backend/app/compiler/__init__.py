"""
Circuit compiler: Euler decomposition, layout on a lattice and measurement
scheduling. Execution lives in app.services.execution_service.
"""

from app.compiler.euler import euler_decompose, input_prep_angles

__all__ = ["euler_decompose", "input_prep_angles"]
