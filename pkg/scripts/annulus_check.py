"""Circle tube vs the exact annulus spectrum from Bessel functions."""
import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from oracles import annulus_dirac_eigenvalues  # noqa: E402

from dirac_tube.geometry import build_frame, make_circle  # noqa: E402
from dirac_tube.strip2d import StripProblem, strip_spectrum  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=float, default=0.0)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--n", type=int, default=6)
    args = ap.parse_args()
    frame = build_frame(make_circle(1.0), 512)
    print("epsilon,j,E_strip,E_annulus,rel_err")
    for e in args.eps:
        ref = annulus_dirac_eigenvalues(1 - e, 1 + e, args.m, args.n)
        S = strip_spectrum(StripProblem(frame, e, args.m, 24, 6), 2 * args.n)
        for j, (a, b) in enumerate(zip(S.energies, ref), 1):
            print(f"{e},{j},{float(a)!r},{float(b)!r},{abs(a - b) / b:.2e}")


if __name__ == "__main__":
    main()
