"""Widom factors of circular arcs against their large-degree limit.

Usage: python scripts/arc_widom_sweep.py [--half-angles 0.5,1.0,1.5708] [--degrees 8..32]
"""

from __future__ import annotations

import argparse
import math

from chebkit.closed_forms import thiran_detaille_limit
from chebkit.complex_solver import solve_complex
from chebkit.potential import capacity
from chebkit.sets_weights import CircularArc


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--half-angles", default=f"0.5,1.0,{math.pi / 2}")
    p.add_argument("--degrees", default="8..32")
    p.add_argument("--step", type=int, default=4)
    args = p.parse_args()
    lo, hi = (int(t) for t in args.degrees.split(".."))
    print("half_angle,degree,t_n,widom,limit,gap")
    for alpha in (float(t) for t in args.half_angles.split(",")):
        s = CircularArc(0, 1, alpha)
        cap = capacity(s).value
        target = thiran_detaille_limit(alpha)
        for n in range(lo, hi + 1, args.step):
            sol = solve_complex(s, None, n)
            W = sol.norm / cap**n
            print(f"{alpha:.6f},{n},{sol.norm:.12e},{W:.10f},{target:.10f},{sol.gap:.1e}")


if __name__ == "__main__":
    main()
