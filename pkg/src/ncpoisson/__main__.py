import sys

from .cliio import main

sys.exit(main())
