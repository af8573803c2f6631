# -*- coding: utf-8 -*-
"""
Entry point for running torusdiv as a module.

Usage:
    python -m torusdiv --help
"""

import sys
from .app import main

if __name__ == "__main__":
    sys.exit(main())
