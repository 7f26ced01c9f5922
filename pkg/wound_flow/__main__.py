import sys

from wound_flow import WoundFlow

if __name__ == "__main__":
    sys.exit(WoundFlow().run())
