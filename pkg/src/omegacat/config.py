"""Run profiles: bounds shared by the CLI and the acceptance suite.

Precedence: explicit CLI flags > OMEGACAT_PROFILE environment variable >
built-in defaults.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DomainError


class Mode(str, Enum):
    """Whether involution term formers are admitted."""

    STRICT = "strict"
    INVOLUTIVE = "inv"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        for m in cls:
            if text in (m.value, m.name.lower()):
                return m
        raise DomainError(f"unknown mode {text!r}; expected 'strict' or 'inv'")


@dataclass(frozen=True)
class Profile:
    """Default bounds for one run."""

    name: str = "desk"
    max_dim: int = 3
    depth: int = 2
    shape_bound: int = 3
    rewrite_budget: int = 100_000
    seed: int = 0


_PROFILES = {
    "desk": Profile(),
    "smoke": Profile(name="smoke", max_dim=2, depth=1, shape_bound=2),
}


def load_profile(name: str | None = None, **overrides) -> Profile:
    """Resolve a profile by flag, then environment, then defaults."""
    if name is None:
        name = os.environ.get("OMEGACAT_PROFILE", "desk")
    if name not in _PROFILES:
        raise DomainError(f"unknown profile {name!r}; known: {sorted(_PROFILES)}")
    prof = _PROFILES[name]
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(prof, **overrides) if overrides else prof
