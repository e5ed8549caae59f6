"""
State-vector simulation: gate matrices, labelled registers and outcome sources.
"""

from app.simulator.outcome_sources import (
    BaseOutcomeSource,
    ExhaustiveOutcomes,
    ForcedOutcomes,
    SampledOutcomes,
    get_outcome_source,
)
from app.simulator.state_register import StateRegister, StateVectorSimulator, simulator

__all__ = [
    "BaseOutcomeSource",
    "ExhaustiveOutcomes",
    "ForcedOutcomes",
    "SampledOutcomes",
    "StateRegister",
    "StateVectorSimulator",
    "get_outcome_source",
    "simulator",
]
