import sys

from qtexture.cli import main

sys.exit(main())
