import argparse

from app.api.routes import basis, decompose, info, verify

COMMANDS = (info, decompose, basis, verify)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pm-lattice",
        description="Perfect matching lattice bases from perfect matchings, with exact verification.",
    )
    parser.add_argument("--log-level", default=None, help="Overrides PMLATTICE_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
