import sys

from kinklab.cli import main

sys.exit(main())
