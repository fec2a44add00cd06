import sys

from lizardlink.cli import main

sys.exit(main())
