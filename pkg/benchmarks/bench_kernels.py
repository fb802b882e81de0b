"""Compare the compiled token kernels with their pure-Python twins.

    python3 benchmarks/bench_kernels.py [-n 5] [--repeat 5]

Both implementations run on the token arrays of every connected two-cycle
presentation with ``n`` vertices; results are checked for equality first.
"""

from __future__ import annotations

import argparse
import sys
import timeit

from gentle import _pykernels
from gentle.enumeration import enumerate_gentle

try:
    from gentle import _ckernels
except ImportError:
    _ckernels = None


def _workloads(arrays):
    return {
        "phi_pairs": lambda k: [k.phi_pairs(s, f) for s, f in arrays],
        "canonical_code": lambda k: [k.canonical_code(s) for s, _ in arrays],
        "traversal_order": lambda k: [k.traversal_order(0, s) for s, _ in arrays],
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-n", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return 1

    arrays = [(p.token_data.succ, p.token_data.fsucc) for p in enumerate_gentle(args.n, 2)]
    print(f"{len(arrays)} presentations with n={args.n}, best of {args.repeat}")
    print(f"{'kernel':<16} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, work in _workloads(arrays).items():
        if work(_pykernels) != work(_ckernels):
            print(f"{name}: implementations disagree")
            return 1
        py = min(timeit.repeat(lambda: work(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: work(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<16} {py * 1e3:>10.2f} {cy * 1e3:>10.2f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
