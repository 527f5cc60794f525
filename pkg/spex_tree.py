#!/usr/bin/env python3
"""Thin wrapper for running from a checkout -- delegates to the package."""
from spextree.cli import main

if __name__ == "__main__":
    main()
