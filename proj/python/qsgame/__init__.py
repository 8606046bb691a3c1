"""Qualitative multi-objective stochastic games."""

from ._core import (
    Game,
    InvariantError,
    ParseError,
    ResourceError,
    classify,
    dqbf_reduce,
    dqbf_sat,
    fixture,
    fixture_names,
    fixture_queries,
    format_query,
    negate,
    oracle,
    parse_game,
    region,
    run_cli,
    solve,
    verify,
)

__all__ = [
    "Game",
    "InvariantError",
    "ParseError",
    "ResourceError",
    "classify",
    "dqbf_reduce",
    "dqbf_sat",
    "fixture",
    "fixture_names",
    "fixture_queries",
    "format_query",
    "negate",
    "oracle",
    "parse_game",
    "region",
    "run_cli",
    "solve",
    "verify",
]
