import sys

from attenuant.cli import main

sys.exit(main())
