#!/usr/bin/env python3
"""Validates `hiot bench --out json` output against docs/bench-schema.md."""

import json
import subprocess
import sys

COUNT_KEYS = {"pairings", "g1_muls", "g2_exps", "hashes", "macs", "brief"}
TIMING_KEYS = {"mean_ms", "variance_ms2", "min_ms", "max_ms", "iterations"}
COMM_KEYS = {
    "request_bytes",
    "confirm_bytes",
    "analytic_request_bytes",
    "analytic_confirm_bytes",
    "handshake_bits",
    "nominal_handshake_bits",
}


def main() -> int:
    hiot = sys.argv[1] if len(sys.argv) > 1 else "./build/hiot"
    out = subprocess.run(
        [hiot, "bench", "--backend", "production", "--iterations", "3", "--seed", "2",
         "--out", "json"],
        capture_output=True, text=True, check=True)
    rep = json.loads(out.stdout)

    for key in ("backend", "seed", "iterations", "counts", "timing",
                "communication", "count_deltas", "nominal"):
        assert key in rep, f"missing top-level key {key}"

    for entity, phases in rep["counts"].items():
        assert entity in {"user", "gwn", "sensor"}, entity
        for phase, counts in phases.items():
            assert phase in {"setup", "registration", "authentication",
                             "confirmation"}, phase
            assert set(counts) == COUNT_KEYS, (entity, phase, set(counts))

    for phase in ("registration", "authentication"):
        assert set(rep["timing"][phase]) == TIMING_KEYS

    assert set(rep["communication"]) == COMM_KEYS
    assert rep["communication"]["request_bytes"] == \
        rep["communication"]["analytic_request_bytes"]
    assert rep["counts"]["user"]["authentication"]["brief"] == "3M+4H"
    assert rep["counts"]["sensor"]["registration"]["pairings"] == 3
    assert isinstance(rep["count_deltas"], list)
    print("bench schema ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
