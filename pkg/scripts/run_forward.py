import sys

from heat_inverse.cli_io.cli import main as cli_main


def main() -> None:
    sys.exit(cli_main(["forward", *sys.argv[1:]]))

if __name__ == "__main__":
    main()
