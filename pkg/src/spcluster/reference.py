"""Built-in regression reference: a 10-unit network with known behavior.

Four representative score vectors, the exact weight matrix correlation
learning must produce for them, and the complete fixed-point set of that
network (four states, verified by exhaustive scan over all 2^10 states).
The ``fixture`` CLI subcommand re-derives everything and fails loudly on
any mismatch, making this a cheap end-to-end regression signal.
"""

from __future__ import annotations

import numpy as np

from . import hopfield

REFERENCE_PATTERNS: tuple[tuple[int, ...], ...] = (
    (1, 0, 1, 0, 0, 0, 0, 1, 1, 1),
    (0, 0, 0, 1, 1, 0, 1, 0, 1, 0),
    (0, 1, 0, 1, 1, 1, 1, 1, 1, 1),
    (0, 0, 1, 0, 0, 1, 0, 0, 0, 0),
)

REFERENCE_WEIGHTS: tuple[tuple[int, ...], ...] = (
    (0, 0, 2, -2, -2, -2, -2, 2, 0, 2),
    (0, 0, -2, 2, 2, 2, 2, 2, 0, 2),
    (2, -2, 0, -4, -4, 0, -4, 0, -2, 0),
    (-2, 2, -4, 0, 4, 0, 4, 0, 2, 0),
    (-2, 2, -4, 4, 0, 0, 4, 0, 2, 0),
    (-2, 2, 0, 0, 0, 0, 0, 0, -2, 0),
    (-2, 2, -4, 4, 4, 0, 0, 0, 2, 0),
    (2, 2, 0, 0, 0, 0, 0, 0, 2, 4),
    (0, 0, -2, 2, 2, -2, 2, 2, 0, 2),
    (2, 2, 0, 0, 0, 0, 0, 4, 2, 0),
)

# Complete fixed-point set of the reference network; the four stored
# patterns collapse pairwise onto two attractors plus their complements.
REFERENCE_FIXED_POINTS: tuple[tuple[int, ...], ...] = (
    (1, 0, 1, 0, 0, 0, 0, 0, 0, 0),
    (1, 0, 1, 0, 0, 0, 0, 1, 0, 1),
    (0, 1, 0, 1, 1, 1, 1, 1, 1, 1),
    (0, 1, 0, 1, 1, 1, 1, 0, 1, 0),
)


def verify() -> list[str]:
    """Re-derive the reference network; returns failure messages (empty = pass)."""
    failures: list[str] = []
    learned = hopfield.hebbian_learn(np.array(REFERENCE_PATTERNS))
    expected = np.array(REFERENCE_WEIGHTS, dtype=np.int64)
    if not np.array_equal(learned, expected):
        bad = np.argwhere(learned != expected)
        failures.append(
            f"learned weights differ from reference at {len(bad)} entries, first at {tuple(bad[0])}"
        )
        return failures  # the remaining checks would chase the wrong matrix

    for k, point in enumerate(REFERENCE_FIXED_POINTS, start=1):
        state = hopfield.bipolar_from_binary(point)
        after, changed = hopfield.sweep(state, learned)
        if changed or not np.array_equal(after, state):
            failures.append(f"reference state {k} is not a fixed point")

    found = {
        tuple(int(v) for v in hopfield.binary_from_bipolar(p))
        for p in hopfield.enumerate_fixed_points(learned)
    }
    expected_points = set(REFERENCE_FIXED_POINTS)
    if not expected_points <= found:
        failures.append("exhaustive scan is missing a reference fixed point")
    if found != expected_points:
        failures.append(
            f"exhaustive scan found {len(found)} fixed points, expected {len(expected_points)}"
        )
    return failures
