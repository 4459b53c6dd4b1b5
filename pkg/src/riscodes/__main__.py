import sys

from riscodes.cli import main

sys.exit(main())
