"""Run the CLI via ``python -m momest``."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
