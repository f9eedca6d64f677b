"""Bundled training data: the ten-activity smart-home context and its reference times."""

from importlib.resources import files

from .context import FormalContext, ReferenceTimeTable, parse_context, parse_reference_times


def fixture_path(name: str):
    return files(__package__).joinpath("data", name)


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def adl_context() -> FormalContext:
    return parse_context(fixture_text("adl_context.csv"), name="adl_context.csv")


def adl_reference_times(context: FormalContext = None) -> ReferenceTimeTable:
    context = context or adl_context()
    return parse_reference_times(fixture_text("adl_reftimes.csv"), context, name="adl_reftimes.csv")
