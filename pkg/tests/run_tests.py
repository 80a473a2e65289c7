#!/usr/bin/env python3
"""
acr-scan Test Runner

Runs the whole pytest suite. Run this from the project root directory;
extra arguments are passed through to pytest.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def main(argv=None):
    """Run all project tests."""
    print("🚀 acr-scan Test Suite")
    print("=" * 50)
    args = [str(Path(__file__).parent)] + list(argv if argv is not None else sys.argv[1:])
    result = pytest.main(args)

    print("\n" + "=" * 50)
    if result == 0:
        print("🎉 All tests passed!")
    else:
        print("❌ Some tests failed. Please check the output above.")
    return int(result)


if __name__ == "__main__":
    sys.exit(main())
