"""omegacat: bounded symbolic kernel for free involutive strict
omega-categories, globular collections and contracted operads."""

from .config import Mode, Profile, load_profile
from .globular import (
    CellRef,
    GlobularMorphism,
    GlobularSet,
    compose_morphisms,
    iterated_boundary,
    parallel,
    pullback,
    terminal_set,
    validate_globular,
)
from .terms import Comp, Gen, Id, Inv, Term, comp, dim_of, gen, idt, inv

__all__ = [
    "CellRef",
    "Comp",
    "Gen",
    "GlobularMorphism",
    "GlobularSet",
    "Id",
    "Inv",
    "Mode",
    "Profile",
    "Term",
    "comp",
    "compose_morphisms",
    "dim_of",
    "gen",
    "idt",
    "inv",
    "iterated_boundary",
    "load_profile",
    "parallel",
    "pullback",
    "terminal_set",
    "validate_globular",
]

__version__ = "0.1.0"
