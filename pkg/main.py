"""
Spectral Turán lab - run the command-line application from a source checkout.

Equivalent to the installed ``turan-lab`` console script.
"""

import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from turan_lab.cli import main  # noqa: E402

logger = logging.getLogger(__name__)


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)
