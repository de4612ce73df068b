"""Access to the shipped example specifications and source models."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .documents import parse_model, parse_spec, parse_triple
from .graphs import Graph
from .patterns import Specification
from .triples import TripleGraph


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("tripat") / "fixtures" / name))


def fixture_text(name: str) -> str:
    return (resources.files("tripat") / "fixtures" / name).read_text()


def load_spec(name: str) -> Specification:
    return parse_spec(fixture_text(f"{name}.yaml"))


def load_source(name: str) -> Graph:
    return parse_model(fixture_text(f"src_{name}.yaml"))


def load_triple(name: str) -> TripleGraph:
    return parse_triple(fixture_text(f"{name}.yaml"))
