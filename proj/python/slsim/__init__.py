# slsim: rollup sequencer simulator with transaction quarantine
# Copyright 2026 The slsim Authors.
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the slsim rollup sequencer simulator."""

from ._slsim import (
    DerivationError,
    ScenarioError,
    address_from_name,
    decode_bitmap,
    derive,
    encode_bitmap,
    quarantine_entries,
    run_scenario,
)

__all__ = [
    "DerivationError",
    "ScenarioError",
    "address_from_name",
    "decode_bitmap",
    "derive",
    "encode_bitmap",
    "quarantine_entries",
    "run_scenario",
]
