"""
Entrypoint for the quadric-torsion command-line tool.

This module ensures that the internal ``app`` package can be imported
regardless of the current working directory, then hands the arguments to
the CLI. ``python main.py analyze --curve "x0^3*y0^3 + ..."`` is equivalent
to the installed ``quadric-torsion`` script.
"""

import os
import sys

CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
if CURRENT_DIR not in sys.path:
    sys.path.insert(0, CURRENT_DIR)

from app.api.cli import main  # type: ignore  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
