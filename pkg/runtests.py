# pylint: skip-file
# Standard Library
import sys
import unittest

if __name__ == "__main__":
    args = sys.argv[1:]
    start = args[0] if args and not args[0].startswith("-") else "mqet"
    verbosity = int(args[args.index("-v") + 1]) if "-v" in args else 1

    suite = unittest.defaultTestLoader.discover(start, top_level_dir=".")
    result = unittest.TextTestRunner(verbosity=verbosity).run(suite)
    sys.exit(not result.wasSuccessful())
