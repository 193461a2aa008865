"""
Entry point for running textland as a module: python -m cli
"""

from cli import main

if __name__ == "__main__":
    main()
