"""
Measurement gadgets.

Patterns are derived by a PatternBuilder; the library lays out the wire,
rotation, CNOT and input-preparation gadgets and the runner executes them.
"""

from app.gadgets.library import (
    EVEN_WIRE_UNITARY,
    build_cnot_composable,
    build_cnot_minimal,
    build_input_prep,
    build_rotation,
    build_wire,
)
from app.gadgets.pattern import MeasurementPattern, MeasurementStep, PatternBuilder
from app.gadgets.runner import (
    GadgetReport,
    corrected_output,
    expected_output,
    measure_step,
    run_gadget,
    run_pattern,
    sweep_branches,
    undo_frame,
)

__all__ = [
    "EVEN_WIRE_UNITARY",
    "GadgetReport",
    "MeasurementPattern",
    "MeasurementStep",
    "PatternBuilder",
    "build_cnot_composable",
    "build_cnot_minimal",
    "build_input_prep",
    "build_rotation",
    "build_wire",
    "corrected_output",
    "expected_output",
    "measure_step",
    "run_gadget",
    "run_pattern",
    "sweep_branches",
    "undo_frame",
]
