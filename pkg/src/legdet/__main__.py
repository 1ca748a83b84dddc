import sys

from legdet.cli import main

sys.exit(main())
