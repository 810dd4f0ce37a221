"""Braces of small order by additive type, with the number of valid
configurations and of solution classes within a point budget."""
import argparse
from collections import Counter

from braceybe.braces import additive_type
from braceybe.corpus import census
from braceybe.enumeration import enumerate_solutions, iter_configs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=8)
    ap.add_argument("--points", type=int, default=6)
    args = ap.parse_args()
    by_type = Counter()
    print(f"{'order':>5} {'idx':>4} {'additive':>10} {'configs':>8} {'classes':>8} {'basic':>6}")
    for n, b, B in census(args.max_order):
        by_type[(n, additive_type(B))] += 1
        configs = sum(1 for _ in iter_configs(B, args.points))
        classes = len(enumerate_solutions(B, args.points))
        basic = len(enumerate_solutions(B, args.points, basic_only=True))
        kind = "x".join(map(str, additive_type(B))) or "1"
        print(f"{n:>5} {b:>4} {kind:>10} {configs:>8} {classes:>8} {basic:>6}")
    print()
    for (n, t), count in sorted(by_type.items()):
        print(f"order {n}, additive {t}: {count} braces")


if __name__ == "__main__":
    main()
