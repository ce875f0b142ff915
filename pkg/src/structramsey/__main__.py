import sys

from structramsey.cli import main

sys.exit(main())
