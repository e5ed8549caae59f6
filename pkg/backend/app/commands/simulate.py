"""simulate: compile a circuit file and execute it shot by shot"""

import logging
from pathlib import Path

import click

from app.commands import CommandError
from app.commands.circuit_format import parse_circuit
from app.compiler.layout import layout
from app.compiler.schedule import schedule
from app.config import DEFAULT_SEED, DEFAULT_SHOTS
from app.constants import INPUT_MODES, READOUT_BASES, STRATEGIES
from app.exceptions import LayoutError, MBQCError, RegisterTooLargeError
from app.models import RunConfig
from app.services.execution_service import ExecutionStrategy, execution_service
from app.simulator import get_outcome_source
from app.utils import format_table

logger = logging.getLogger(__name__)


def _parse_segments(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a comma-separated column list")


@click.command("simulate")
@click.argument("circuit", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True)
@click.option("--shots", type=click.IntRange(min=1), default=DEFAULT_SHOTS, show_default=True)
@click.option("--strategy", type=click.Choice(STRATEGIES), default="once", show_default=True)
@click.option("--segments", default=None, help="Cut columns for staged runs, e.g. 4,10")
@click.option("--readout-basis", type=click.Choice(READOUT_BASES), default="Z", show_default=True)
@click.option(
    "--input-mode", type=click.Choice(INPUT_MODES), default="written", show_default=True
)
@click.option(
    "--trim/--no-trim",
    default=True,
    show_default=True,
    help="Drop unused sites instead of carving them",
)
@click.option("--trace", is_flag=True, help="Print the pattern and per-shot frames")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
def simulate(
    circuit, seed, shots, strategy, segments, readout_basis, input_mode, trim, trace, output
):
    """Compile CIRCUIT onto a cluster and print its readout histogram."""
    config = RunConfig(
        command="simulate",
        inputs=[circuit],
        seed=seed,
        shots=shots,
        strategy=strategy,
        trace=trace,
        output=output,
    )
    cuts = _parse_segments(segments)
    try:
        logical = parse_circuit(config.inputs[0].read_text())
        plan = layout(logical, input_mode=input_mode, trim=trim)
        sched = schedule(plan)
        if config.strategy == "staged" and cuts is not None:
            run_strategy = ExecutionStrategy.staged(cuts)
        else:
            run_strategy = ExecutionStrategy.for_plan(config.strategy, plan)
        source = get_outcome_source("sampled", seed=config.seed)
        result = execution_service.execute(
            plan, run_strategy, source, config.shots, readout_basis, sched
        )
    except LayoutError as e:
        hint = f" (minimal dims {e.minimal_dims})" if e.minimal_dims else ""
        raise CommandError(f"{e}{hint}")
    except RegisterTooLargeError as e:
        raise CommandError(f"{e}; try --strategy staged")
    except MBQCError as e:
        raise CommandError(str(e))

    lines = []
    if config.trace:
        lines.append(plan.pattern.dump())
        lines.append(sched.dump())
        for number, shot in enumerate(result.shots):
            lines.append(f"shot {number}\n")
            lines.extend(
                f"frame {wire} x={shot.frame.x[wire]} z={shot.frame.z[wire]}\n"
                for wire in range(shot.frame.wires)
            )
    header = {
        "seed": config.seed,
        "shots": config.shots,
        "strategy": config.strategy,
        "readout_basis": readout_basis,
        "qubits": plan.qubit_count,
    }
    rows = sorted(result.histogram().items())
    lines.append(format_table(header, ["bits", "count"], rows))
    text = "".join(lines)
    if config.output is not None:
        config.output.write_text(text)
        logger.info(f"[CLI] Wrote {len(rows)} histogram rows to {config.output}")
    else:
        click.echo(text, nl=False)
