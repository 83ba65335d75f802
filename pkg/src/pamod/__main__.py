import sys

from pamod.cli import main

sys.exit(main())
