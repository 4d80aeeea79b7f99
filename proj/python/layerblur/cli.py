"""Thin wrapper that execs the bundled command line tool."""

import os
import subprocess
import sys


def _binary_path():
    here = os.path.dirname(os.path.abspath(__file__))
    name = "layerblur.exe" if os.name == "nt" else "layerblur"
    cand = os.path.join(here, "bin", name)
    if os.path.exists(cand):
        return cand
    return name  # fall back to PATH


def main():
    raise SystemExit(subprocess.call([_binary_path()] + sys.argv[1:]))


if __name__ == "__main__":
    main()
