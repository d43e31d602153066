import sys

from noiselet_spc.cli import main

sys.exit(main())
