"""Solution classes over a Rump brace Z/p^n with x.y = x+y+p^i xy."""
import argparse

from braceybe.braces import orbit_decomposition, rump_brace
from braceybe.config import Bounds
from braceybe.enumeration import enumerate_solutions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--i", type=int, default=1)
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--basic", action="store_true")
    args = ap.parse_args()
    B = rump_brace(args.p, args.n, args.i)
    dec = orbit_decomposition(B)
    print(f"Z/{args.p}^{args.n}, i={args.i}: {len(dec.orbits)} lambda-orbits")
    for orb in dec.orbits:
        print(f"  {list(orb)}")
    bounds = Bounds(iso_points=max(args.points, Bounds().iso_points))
    classes = enumerate_solutions(B, args.points, args.basic, bounds)
    print(f"{len(classes)} classes with at most {args.points} points")
    for cfg, s in classes:
        fams = [[list(K.elements) for K in fam] for fam in cfg.families]
        print(f"  size {s.size:>3}  X={list(cfg.reps)}  families={fams}")


if __name__ == "__main__":
    main()
