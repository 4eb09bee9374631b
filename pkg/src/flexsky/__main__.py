import sys

from flexsky.cli import main

sys.exit(main())
