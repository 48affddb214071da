"""Module entrypoint for `python -m leverify`."""

from .cli import main


if __name__ == "__main__":
    main()
