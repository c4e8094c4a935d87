#!/usr/bin/env python
# bash interface script for sweeps, critical temperatures and model comparisons.
import sys

from dickequiv import sweeps

sys.exit(sweeps.main(sys.argv[1:]))
