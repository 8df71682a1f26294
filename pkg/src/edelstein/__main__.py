import sys

from edelstein.cli import main

sys.exit(main())
