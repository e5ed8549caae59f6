#!/usr/bin/env python3
"""
Exhaustive search for the rotation gadget's adaptive sign rule.

Every step after the first may negate its angle depending on the XOR of a
subset of earlier outcomes. The search keeps the subsets for which every
outcome branch leaves U_R(xi, eta, zeta) times a Pauli byproduct, then fits
the byproduct and the incoming-frame terms. The result is what
ROTATION_SIGN_DEPENDENCIES and ROTATION_FRAME_OUT in app.gadgets.library hold.
"""
import logging
import os
import sys
from itertools import chain, combinations, product

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from app.gadgets.library import ROTATION_FRAME_OUT, ROTATION_SIGN_DEPENDENCIES, build_rotation
from app.gadgets.pattern import MeasurementPattern
from app.gadgets.runner import run_gadget
from app.models import PauliFrame, QubitPrep
from app.simulator import ExhaustiveOutcomes, simulator
from app.simulator.gates import euler_matrix, pauli_power

logging.basicConfig(level=logging.WARNING)
logger = logging.getLogger(__name__)

ANGLES = (0.37, 1.21, -2.05)
FRAME_ATOMS = (("x", 0), ("z", 0))
STEPS = 4


def subsets(items):
    items = list(items)
    sizes = range(len(items) + 1)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in sizes)]


def with_rule(pattern: MeasurementPattern, rule: dict) -> MeasurementPattern:
    steps = list(pattern.steps)
    for index, (outcomes, atoms) in rule.items():
        steps[index] = steps[index].model_copy(update={"sign_dep": outcomes, "frame_dep": atoms})
    return pattern.model_copy(update={"steps": tuple(steps)})


def byproduct(pattern, logical, frame, branch):
    """(x, z) with raw output = X^x Z^z U psi, or None if no Pauli fits."""
    x_in, z_in = frame.bits(0)
    raw_input = QubitPrep.from_vector(pauli_power(x_in, z_in) @ logical)
    report = run_gadget(pattern, {0: raw_input}, ExhaustiveOutcomes(branch, STEPS), frame=frame)
    output = simulator.reorder(report.cluster.register, [(4,)]).amplitudes
    target = euler_matrix(*ANGLES) @ logical
    for x, z in product((0, 1), repeat=2):
        if abs(np.vdot(pauli_power(x, z) @ target, output)) ** 2 > 1 - 1e-9:
            return x, z
    return None


def fit(values: list, atoms) -> frozenset | None:
    """Subset of ``atoms`` whose XOR reproduces every recorded bit."""
    for candidate in subsets(atoms):
        if all(bit == sum(env[a] for a in candidate) % 2 for env, bit in values):
            return candidate
    return None


def search(inputs, frames):
    base = build_rotation(*ANGLES)
    outcome_options = {index: subsets(range(index)) for index in range(1, STEPS)}
    atom_options = subsets(FRAME_ATOMS) if len(frames) > 1 else [frozenset()]
    found = []
    for choice in product(*(product(outcome_options[i], atom_options) for i in range(1, STEPS))):
        rule = dict(zip(range(1, STEPS), choice))
        pattern = with_rule(base, rule)
        records = []
        valid = True
        for frame, branch, logical in product(frames, range(2**STEPS), inputs):
            result = byproduct(pattern, logical, frame, branch)
            if result is None:
                valid = False
                break
            env = {i: (branch >> i) & 1 for i in range(STEPS)}
            env.update({("x", 0): frame.x[0], ("z", 0): frame.z[0]})
            records.append((env, result))
        if valid:
            found.append((rule, records))
    return found


def main():
    rng = np.random.default_rng(7)
    inputs = [QubitPrep.random(rng).amplitudes() for _ in range(2)]

    print("Searching outcome dependencies on a zero input frame...")
    plain = search(inputs, [PauliFrame.zero(1)])
    for rule, _ in plain:
        print("  " + ", ".join(f"step {i}: {sorted(rule[i][0])}" for i in sorted(rule)))

    print("Searching incoming frame terms...")
    frames = [PauliFrame(x=(x,), z=(z,)) for x, z in product((0, 1), repeat=2)]
    atoms = list(range(STEPS)) + list(FRAME_ATOMS)
    for rule, records in search(inputs, frames):
        x_out = fit([(env, bits[0]) for env, bits in records], atoms)
        z_out = fit([(env, bits[1]) for env, bits in records], atoms)
        print(f"  rule {rule}")
        if x_out is None or z_out is None:
            logger.warning("Byproduct is not an XOR of outcomes and frame bits")
            continue
        print(f"  frame out X <- {sorted(map(str, x_out))}, Z <- {sorted(map(str, z_out))}")

    print("Library constants:")
    print(f"  ROTATION_SIGN_DEPENDENCIES = {ROTATION_SIGN_DEPENDENCIES}")
    print(f"  ROTATION_FRAME_OUT = {ROTATION_FRAME_OUT}")


if __name__ == "__main__":
    main()
