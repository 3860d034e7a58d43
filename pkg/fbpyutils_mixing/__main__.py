import sys

from fbpyutils_mixing.cli import main

if __name__ == "__main__":
    sys.exit(main())
