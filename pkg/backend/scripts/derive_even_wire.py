#!/usr/bin/env python3
"""
Find the corrected map of wires with an even number of sites.

An n-site wire X-measures n-1 sites. After the builder's byproduct is undone
the output is W psi for a fixed one-qubit W; for odd n the map is the
identity, for even n this script checks which Clifford it is across every
outcome branch. The answer is EVEN_WIRE_UNITARY in app.gadgets.library.
"""
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from app.gadgets.library import EVEN_WIRE_UNITARY, build_wire
from app.gadgets.runner import corrected_output, run_gadget
from app.models import QubitPrep
from app.simulator import ExhaustiveOutcomes
from app.simulator.gates import HADAMARD, IDENTITY, PAULI_X, PAULI_Z, equal_up_to_phase

CANDIDATES = {
    "I": IDENTITY,
    "H": HADAMARD,
    "X": PAULI_X,
    "Z": PAULI_Z,
    "HX": HADAMARD @ PAULI_X,
    "HZ": HADAMARD @ PAULI_Z,
}


def matching(n: int, inputs: list[QubitPrep]) -> list[str]:
    """Candidates W with corrected output = W psi on every branch and input."""
    pattern = build_wire(n)
    names = []
    for name, unitary in CANDIDATES.items():
        holds = True
        for branch in range(2 ** (n - 1)):
            for prep in inputs:
                report = run_gadget(pattern, {0: prep}, ExhaustiveOutcomes(branch, n - 1))
                output = corrected_output(report).amplitudes
                if not equal_up_to_phase(output, unitary @ prep.amplitudes(), tol=1e-9):
                    holds = False
                    break
            if not holds:
                break
        if holds:
            names.append(name)
    return names


def main():
    rng = np.random.default_rng(7)
    inputs = [QubitPrep.random(rng) for _ in range(3)]
    for n in range(2, 9):
        print(f"wire({n}): {', '.join(matching(n, inputs)) or 'no candidate'}")
    library = [name for name, u in CANDIDATES.items() if np.allclose(u, EVEN_WIRE_UNITARY)]
    print(f"EVEN_WIRE_UNITARY in the library: {library}")


if __name__ == "__main__":
    main()
