"""Allow ``python -m seqent`` to behave like the ``seqent`` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
