"""Module entry point delegating to the command-line interface."""

import sys

from hsev.cli import main

if __name__ == "__main__":
    sys.exit(main())
