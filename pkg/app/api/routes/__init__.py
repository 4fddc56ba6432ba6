"""Command modules; each exposes `register(subparsers)` and a handler returning an exit code."""
import argparse

from app.api.schemas import OutputModel


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", help="Graph file: header `n m`, then one `u v` line per edge (1-based)")
    parser.add_argument("--json", action="store_true", help="Print JSON instead of text")


def emit(model: OutputModel, as_json: bool, text: list[str]) -> None:
    print(model.to_json() if as_json else "\n".join(text))
