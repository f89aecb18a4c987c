"""Shipped fixture curves, one per real topological type.

Each fixture is a valued quartic whose Newton subdivision is the
unimodular honeycomb triangulation.  Five of them pin the real topology
of small-t realizations through their coefficient signs (combinatorial
patchworking); the sixth ("empty") uses a height-compressed lift with
damped odd-degree coefficients so that its realizations at the default
schedule are positive definite.  See scripts/make_fixtures.py for the
construction and scripts/find_fixtures.py for the sign search.
"""

from __future__ import annotations

from importlib import resources

from .errors import SchemaError, UnsupportedInputError
from .quartic import (
    ValuedQuartic,
    is_tropically_smooth,
    newton_subdivision,
    parse_quartic,
)

#: Shipped fixtures and the real topology of their schedule realizations.
FIXTURE_NAMES = (
    "empty",
    "one-oval",
    "two-nested",
    "two-ovals",
    "three-ovals",
    "four-ovals",
)


def load_fixture(name: str) -> ValuedQuartic:
    """Parse a shipped fixture and check its smoothness contract."""
    if name not in FIXTURE_NAMES:
        raise UnsupportedInputError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}"
        )
    document = (
        resources.files(__package__).joinpath(f"fixtures/{name}.qrt").read_text()
    )
    q = parse_quartic(document)
    if not is_tropically_smooth(newton_subdivision(q)):
        raise SchemaError(f"fixture {name} is not tropically smooth")
    return q


def load_all_fixtures():
    return tuple(load_fixture(name) for name in FIXTURE_NAMES)
