"""Allow running as `python -m ibplane`."""

from ibplane.cli import main

main()
