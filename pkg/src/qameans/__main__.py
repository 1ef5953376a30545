"""Module entry point so `python -m qameans` matches the console script."""

from .cli import main

main()
