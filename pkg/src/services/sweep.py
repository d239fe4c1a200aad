"""Outage curve sweeps written as whitespace-separated column files.

A sweep evaluates the lower, upper and independent curves at equally
spaced values of one variable. Points are evaluated concurrently and the
rows are assembled in sweep order, so identical specs give identical files.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from dotenv import dotenv_values

from src.config import get_settings
from src.models import Direction, SweepSpec, SweepVariable
from src.services.bounds_core import ConfigurationError, event_probabilities
from src.services.copulas import build_achieving_coupling
from src.services.marginals import transform
from src.services.montecarlo import estimate
from src.services.rates import eps_outage_rate
from src.services.rayleigh import outage_probability

logger = logging.getLogger(__name__)

CURVES = (Direction.LOWER, Direction.UPPER, Direction.INDEPENDENT)


def header(spec: SweepSpec) -> list[str]:
    """Column names of the result file."""
    columns = [spec.variable.column, "lower", "upper", "indep"]
    if spec.mc is not None:
        columns += ["lowerMC", "upperMC", "indepMC"]
    if spec.events:
        columns += ["probE2", "probE3"]
    return columns


def _check_spec(spec: SweepSpec) -> None:
    if spec.mc is None:
        return
    if spec.mc.seed is None:
        raise ConfigurationError("Monte Carlo columns require an explicit seed")
    if spec.variable is SweepVariable.EPS_TARGET:
        raise ConfigurationError("Monte Carlo columns are not defined for eps_target sweeps")


def evaluate_point(spec: SweepSpec, index: int, value: float) -> list[float]:
    """Row of values for one sweep point, in header order."""
    params = spec.params_at(value)
    if spec.variable is SweepVariable.EPS_TARGET:
        row = [eps_outage_rate(c, spec.scenario, params, value).rate_s for c in CURVES]
    else:
        row = [outage_probability(spec.scenario, c, params) for c in CURVES]

    if spec.mc is not None:
        pair = transform(params)
        for k, curve in enumerate(CURVES):
            plan = None
            if curve is not Direction.INDEPENDENT:
                plan = build_achieving_coupling(pair, spec.scenario, curve, spec.mc.n_atoms)
            mc = estimate(
                spec.scenario,
                pair,
                spec.mc.n_samples,
                spec.mc.seed,
                plan=plan,
                stream=(index, k),
            )
            row.append(mc.mean)

    if spec.events:
        row.extend(event_probabilities(transform(params)))

    return [value, *row]


def run_sweep(spec: SweepSpec, out_path: str | Path) -> Path:
    """Evaluate a sweep and write it as a column file.

    Args:
        spec: Sweep definition.
        out_path: Destination file; parent directories must exist.

    Returns:
        Path of the written file.

    Raises:
        ConfigurationError: If Monte Carlo columns are requested without a seed
            or for an eps_target sweep.
        OSError: If the file cannot be written.
    """
    _check_spec(spec)
    out_path = Path(out_path)
    values = spec.values()
    workers = get_settings().SWEEP_WORKERS
    logger.info(
        f"Sweeping {spec.variable.value} over [{spec.start}, {spec.stop}] "
        f"({spec.points} points, {spec.scenario.value})"
    )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(
            pool.map(lambda item: evaluate_point(spec, *item), enumerate(values.tolist()))
        )

    lines = [" ".join(header(spec))]
    lines += [" ".join(f"{v:.10g}" for v in row) for row in rows]
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")

    logger.info(f"Wrote {len(rows)} rows to {out_path}")
    return out_path


def read_sweep_file(path: str | Path) -> dict[str, str]:
    """Read key=value sweep settings.

    Keys mirror the long command-line flags without dashes, e.g.
    ``snr_eve=0`` or ``mc_samples=100000``. Keys with empty values are dropped.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Sweep config not found: {path}")
    values = dotenv_values(path)
    return {key.lower(): value for key, value in values.items() if value not in (None, "")}
