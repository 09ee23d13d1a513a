"""
app.py — command-line entry point
==================================
Runs the uniwkb CLI from a source checkout:

    python app.py spectrum --potential hydrogen --params l=1 --n 0..4
"""
import sys

from uniwkb.cli import main
from uniwkb.core.logging_config import get_logger

# ── Bootstrap ─────────────────────────────────────────────────────────────────
logger = get_logger("uniwkb.app")


# ── Launch ────────────────────────────────────────────────────────────────────
if __name__ == "__main__":
    logger.debug("argv: %s", sys.argv[1:])
    sys.exit(main())
