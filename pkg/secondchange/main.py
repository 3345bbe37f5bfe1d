import sys

from secondchange.core.setup import run_app


def main() -> None:
    sys.exit(run_app())


if __name__ == "__main__":
    main()
