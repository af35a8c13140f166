"""Bundled instances realizing the worked cases from the literature."""

from __future__ import annotations

import json
from importlib import resources

from .datum import InducingDatum, parse_instance
from .errors import UnknownExample

EXAMPLE_NAMES = ("EX_A", "EX_B", "EX_C", "EX_GU3", "EX_ODD")


def example_text(name: str) -> str:
    if name not in EXAMPLE_NAMES:
        raise UnknownExample(f"unknown example {name!r}; choose from {EXAMPLE_NAMES}")
    return (
        resources.files("rgroups")
        .joinpath("instances")
        .joinpath(f"{name}.json")
        .read_text()
    )


def example_doc(name: str) -> dict:
    return json.loads(example_text(name))


def example_datum(name: str) -> InducingDatum:
    return parse_instance(example_text(name))
