import sys

from qsg.harness.cli import main

sys.exit(main())
