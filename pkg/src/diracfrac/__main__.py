import sys

from diracfrac.cli import main

sys.exit(main())
