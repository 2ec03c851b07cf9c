"""Entry point for ``python -m mqet``."""

# Standard Library
import sys

# MQET
from mqet.cli import main

if __name__ == "__main__":
    sys.exit(main())
