"""Fit E_j(ε) = c₋₁/ε + c₀ + c₁ε on a geometric ε-grid and compare with the expansion."""
import argparse

from dirac_tube.asymptotics import verify_theorem
from dirac_tube.geometry import build_frame, make_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curve", default="ellipse 2 1")
    ap.add_argument("--m", type=float, nargs="+", default=[0.0, 1.0])
    ap.add_argument("--j", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.05, 0.025])
    ap.add_argument("--K", type=int, default=24)
    ap.add_argument("--N_t", type=int, default=6)
    args = ap.parse_args()
    name, *p = args.curve.split()
    frame = build_frame(make_curve(name, *map(float, p)), 512)
    print("m,j,mu_2j,c_minus1,c0,c0_pred,c1,c1_pred,c1_rel_err")
    for m in args.m:
        for j in args.j:
            r = verify_theorem(frame, m, j, args.eps, args.K, args.N_t)
            f, q = r.fitted, r.predicted
            print(f"{m},{j},{r.mu2j:.10f},{f.c_minus1:.9f},{f.c0:.6f},{q.c0:.6f},"
                  f"{f.c1:.6f},{q.c1:.6f},{abs(f.c1 - q.c1) / abs(q.c1):.4f}")


if __name__ == "__main__":
    main()
