#!/usr/bin/env python3
"""
Golden report generator.
Runs every command that applies to each fixture and writes its reports under fixtures/golden/
"""

import logging
from pathlib import Path

from semibertrand.cli.main import run
from semibertrand.schemas.job import Command, JobConfig

logger = logging.getLogger(__name__)

# Get the path to the fixture inputs
FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN_DIR = FIXTURE_DIR / "golden"

JOBS = {
    "helix_e13": [(Command.CLASSIFY, {}), (Command.FRENET, {}), (Command.FIT_CLASSICAL, {})],
    "planar_e12": [(Command.CLASSIFY, {}), (Command.FRENET, {}), (Command.FIT_CLASSICAL, {})],
    "timelike_e24": [(Command.CLASSIFY, {})],
    "null_e24": [(Command.CLASSIFY, {})],
    "constant_131": [
        (Command.SYNTH, {}),
        (Command.FRENET, {}),
        (Command.SCAN_CLASSICAL, {}),
        (Command.BERTRAND_CHECK, {"gamma_hint": 1.5}),
        (Command.BERTRAND_MATE, {"gamma_hint": 1.5}),
        (Command.BERTRAND_VERIFY, {"gamma_hint": 1.5}),
    ],
    "sinusoidal_13": [
        (Command.BERTRAND_CHECK, {}),
        (Command.BERTRAND_MATE, {}),
        (Command.BERTRAND_VERIFY, {}),
    ],
    "linear_k2": [(Command.BERTRAND_CHECK, {})],
}


def generate_fixtures() -> None:
    """Regenerate every golden report."""
    for stem, jobs in JOBS.items():
        for command, options in jobs:
            config = JobConfig(
                command=command,
                input_path=FIXTURE_DIR / f"{stem}.toml",
                output_path=GOLDEN_DIR / stem,
                **options,
            )
            status = run(config)
            logger.info(f"{stem} {command.value}: exit {status}")

    logger.info("Golden reports regenerated")


if __name__ == "__main__":
    generate_fixtures()
