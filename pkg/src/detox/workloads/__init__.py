"""Bundled DETOx-IL workloads used by the tests and demos."""

from importlib import resources

from ..lang import Program, parse

NAMES = ("p0", "p1", "sort10", "synth8")


def path(name: str):
    return resources.files(__name__) / f"{name}.dtx"


def source(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> Program:
    return parse(source(name))
