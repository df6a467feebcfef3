"""Ritz convergence of E_1(ε) in (K, N_t) for a circle or ellipse tube."""
import argparse

from dirac_tube.geometry import build_frame, make_curve
from dirac_tube.strip2d import StripProblem, strip_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curve", default="ellipse 2 1")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--m", type=float, default=0.0)
    args = ap.parse_args()
    name, *p = args.curve.split()
    frame = build_frame(make_curve(name, *map(float, p)), 512)
    ref = None
    print("K,N_t,dim,E_1,E_2,pair_gap_1,rel_change")
    for K, N in ((8, 2), (12, 3), (16, 4), (24, 6), (32, 8), (40, 10)):
        S = strip_spectrum(StripProblem(frame, args.eps, args.m, K, N), 4)
        change = "" if ref is None else f"{(ref - S.E(1)) / S.E(1):.3e}"
        print(f"{K},{N},{S.dim},{S.E(1)!r},{S.E(2)!r},{S.pair_gaps[0]:.2e},{change}")
        ref = S.E(1)


if __name__ == "__main__":
    main()
