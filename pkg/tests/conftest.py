"""Shared helpers for the test suite."""

import json
import subprocess
import sys


def run_cli(*args, timeout=300):
    """Run the installed CLI in a subprocess; returns CompletedProcess."""
    return subprocess.run([sys.executable, "-m", "infogeo.cli", *args],
                          capture_output=True, text=True, timeout=timeout)


def envelope(proc):
    """Parse the JSON result envelope from a CLI run."""
    return json.loads(proc.stdout)


def close7(got, want):
    """True when ``got`` matches ``want`` to 7 significant digits."""
    return abs(got - want) <= 5e-7 * max(1.0, abs(want))
