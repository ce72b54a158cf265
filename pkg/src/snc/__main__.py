import sys

from snc.cli import main

sys.exit(main())
