import sys

from fqate.cli import main

sys.exit(main())
