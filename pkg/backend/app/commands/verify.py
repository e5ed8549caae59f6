"""verify: correlation-operator and frame-rule checks"""

import logging
import sys

import click

from app.commands import VERIFICATION_FAILED, CommandError
from app.config import DEFAULT_SEED, VERIFY_MAX_QUBITS, VERIFY_RANDOM_SHAPES
from app.exceptions import MBQCError
from app.services.cluster_service import cluster_service
from app.services.pauli_frame_service import pauli_frame_service
from app.utils import format_table

logger = logging.getLogger(__name__)


@click.command("verify")
@click.option(
    "--max-qubits", type=click.IntRange(1, 20), default=VERIFY_MAX_QUBITS, show_default=True
)
@click.option(
    "--random-shapes",
    type=click.IntRange(min=0),
    default=VERIFY_RANDOM_SHAPES,
    show_default=True,
)
@click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True)
@click.option("--frame-rules/--no-frame-rules", default=True, show_default=True)
def verify(max_qubits, random_shapes, seed, frame_rules):
    """Check every cluster shape up to --max-qubits sites and the frame rules."""
    rows = []
    failures = 0
    try:
        shapes = cluster_service.box_shapes(max_qubits)
        shapes += cluster_service.random_shapes(random_shapes, max_qubits, seed)
        for lattice in shapes:
            passed = cluster_service.verify_cluster(lattice)
            failures += not passed
            subject = "x".join(str(d) for d in lattice.dims) + f"/holes={len(lattice.holes)}"
            rows.append(("cluster", subject, lattice.size, "pass" if passed else "FAIL"))
        if frame_rules:
            for rule in pauli_frame_service.verify_propagation_rules():
                failures += not rule.holds
                result = "pass" if rule.holds else "FAIL"
                rows.append(("rule", rule.name, f"{rule.residual:.3e}", result))
    except MBQCError as e:
        raise CommandError(str(e))

    header = {
        "seed": seed,
        "max_qubits": max_qubits,
        "checks": len(rows),
        "failures": failures,
    }
    click.echo(format_table(header, ["check", "subject", "detail", "result"], rows), nl=False)
    if failures:
        logger.error(f"[CLI] {failures} verification check(s) failed")
        sys.exit(VERIFICATION_FAILED)
