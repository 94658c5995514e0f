import sys

from gmpforge.cli import main

sys.exit(main())
