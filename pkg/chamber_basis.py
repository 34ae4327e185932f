#!/usr/bin/env python3
"""Compute chamber bases and local-system cohomology of real hyperplane arrangements."""

import sys

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
