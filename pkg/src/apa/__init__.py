"""Adequately permissive environment assumptions for omega-regular games."""
from .apa import ApaResult, compute_apa, parity_apa
from .game_model import GameGraph, GameParseError, parse_pgsolver
from .templates import Assumption, ConditionalLiveGroup, render_ltl

__all__ = [
    "ApaResult",
    "Assumption",
    "ConditionalLiveGroup",
    "GameGraph",
    "GameParseError",
    "compute_apa",
    "parity_apa",
    "parse_pgsolver",
    "render_ltl",
]
