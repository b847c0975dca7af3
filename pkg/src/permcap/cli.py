"""Command-line experiment driver.

Exit codes: 0 on success, 1 for invalid input or usage, 2 when a numeric
routine fails (overflow, singular factorization, infeasible allocation).
"""

from __future__ import annotations

import re
import sys

import click
import numpy as np

from .errors import InfeasibleError, ScenarioError
from .experiments import run_complexity, run_experiment, write_csv
from .scenario import load_scenario, parse_n_grid

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
# ArithmeticError covers PermanentOverflowError and FloatingPointError
NUMERIC_ERRORS = (ArithmeticError, InfeasibleError, np.linalg.LinAlgError)


def _emit(header, rows, out: str) -> None:
    if out == "-":
        write_csv(header, rows, sys.stdout)
        return
    with open(out, "w", newline="") as fh:
        write_csv(header, rows, fh)


def parse_sizes(text: str) -> tuple:
    """``"2..8"`` or ``"2,4,6"`` (or a mix) to a tuple of sizes."""
    sizes = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ScenarioError("n", f"empty range {part!r}")
            sizes.extend(range(lo, hi + 1))
        elif part.isdigit():
            sizes.append(int(part))
        else:
            raise ScenarioError("n", f"cannot parse {part!r}; use e.g. 2..8 or 2,3,5")
    return parse_n_grid(sizes, "n")


@click.group()
def cli():
    """Permanent-based capacity bounds and power allocation experiments."""


@cli.command()
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--out", required=True, help="Output CSV path, or - for stdout.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--samples", type=int, default=None, help="Override mc_samples.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Threads for grid points and Monte-Carlo blocks.")
def run(scenario, out, seed, samples, workers):
    """Run the experiment described by a SCENARIO JSON file."""
    sc = load_scenario(scenario).with_overrides(seed=seed, samples=samples)
    header, rows = run_experiment(sc, workers=workers)
    _emit(header, rows, out)


@cli.command()
@click.option("--n", "sizes", default="2..8", show_default=True,
              help="Matrix sizes, a range like 2..8 or a comma list.")
@click.option("--out", required=True, help="Output CSV path, or - for stdout.")
def complexity(sizes, out):
    """Multiplication counts of the six extended-permanent algorithms."""
    header, rows = run_complexity(parse_sizes(sizes))
    _emit(header, rows, out)


def main(argv=None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    try:
        cli.main(args=argv, prog_name="permcap", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_INPUT
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except ScenarioError as exc:
        click.echo(f"error: invalid scenario: {exc}", err=True)
        return EXIT_INPUT
    except NUMERIC_ERRORS as exc:
        click.echo(f"error: numeric failure: {exc}", err=True)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
