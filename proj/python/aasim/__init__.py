"""Python access to the aasim simulator: vulnerability suite, scenarios and the USDC demo."""

import json
import os

from . import _core
from ._core import AasimError

__all__ = ["AasimError", "default_seed", "demo", "prefund", "run_scenario", "run_suite"]


def default_seed() -> int:
    """Seed from AA_SIM_SEED, or 0."""
    return int(os.environ.get("AA_SIM_SEED", "0"))


def run_suite(directory, seed=None) -> dict:
    """Runs every vulnerability row found in `directory` and returns the suite report."""
    return json.loads(_core.suite_json(os.fspath(directory), default_seed() if seed is None else seed))


def run_scenario(path, mode="both", seed=None) -> dict:
    """Runs one scenario file in legacy, aa or both modes."""
    return json.loads(
        _core.scenario_json(os.fspath(path), mode, default_seed() if seed is None else seed)
    )


def demo() -> dict:
    """The 2000 USDC to ETH intent with gas paid in USDC."""
    return json.loads(_core.demo_json())


def prefund(call_gas, verification_gas, pre_verification_gas, max_fee) -> int:
    """(call + verification + pre-verification gas) * max fee, in wei."""
    return int(_core.prefund_dec(call_gas, verification_gas, pre_verification_gas, str(max_fee)))
