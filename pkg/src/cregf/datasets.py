"""Bundled example lifetime datasets (see the files for provenance)."""

from importlib import resources

import numpy as np

__all__ = ["load_failure_times", "load_ball_bearings", "parse_data_text"]


def parse_data_text(text: str) -> np.ndarray:
    """Parse whitespace/newline-separated floats or single-column CSV text.

    Lines starting with ``#`` are ignored; commas are treated as
    separators.  Raises ``ValueError`` on non-numeric tokens or when no
    values remain.
    """
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for token in stripped.replace(",", " ").split():
            try:
                values.append(float(token))
            except ValueError:
                raise ValueError(
                    f"line {lineno}: could not parse {token!r} as a number"
                ) from None
    if not values:
        raise ValueError("no data values found")
    return np.asarray(values, dtype=float)


def _load(name: str) -> np.ndarray:
    text = resources.files("cregf.data").joinpath(name).read_text(encoding="utf-8")
    return parse_data_text(text)


def load_failure_times() -> np.ndarray:
    """Failure times (minutes) of 15 electronic components (Lawless, 2011)."""
    return _load("failure_times.txt")


def load_ball_bearings() -> np.ndarray:
    """Millions of revolutions to failure for 23 ball bearings (Lawless, 2011)."""
    return _load("ball_bearings.txt")
