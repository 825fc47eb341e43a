"""
Command-line entry-point for the closed-form self-consistent solutions.
"""

from cli.commands import main


if "__main__" in __name__:
    main()
