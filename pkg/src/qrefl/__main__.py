import sys

from qrefl.cli import main

sys.exit(main())
