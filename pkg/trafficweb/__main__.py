import sys

from trafficweb.main import main

sys.exit(main())
