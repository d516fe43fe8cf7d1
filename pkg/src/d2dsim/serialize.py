"""Canonical JSON rendering for results and the wire protocol.

Every float is quantized to 9 significant digits before encoding, so repeated
runs with the same inputs produce byte-identical documents.
"""

from __future__ import annotations

import json

import numpy as np

from .linkbudget import LinkReport
from .simulator import StepMetrics


def quantize(value):
    """Recursively round floats to 9 significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float):
        return float(format(value, ".9g"))
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: quantize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [quantize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [quantize(v) for v in value.tolist()]
    return value


def dumps_canonical(obj) -> str:
    """One-line JSON with quantized floats; rejects NaN/inf outright."""
    return json.dumps(quantize(obj), separators=(",", ":"), allow_nan=False)


def report_to_dict(report: LinkReport) -> dict:
    return {
        "tx": str(report.transmitter),
        "rx": str(report.receiver),
        "rb": report.rb,
        "eirp_dbm": report.eirp_dbm,
        "rx_power_dbm": report.rx_power_dbm,
        "interference_mw": report.interference_mw,
        "sinr_db": report.sinr_db,
        "capacity_mbps": report.capacity_mbps,
        "gated": report.gated,
    }


def metrics_to_dict(metrics: StepMetrics) -> dict:
    return metrics.to_dict()
