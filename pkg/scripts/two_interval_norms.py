"""Chebyshev norms of E(a) = [-1, -a] U [a, 1] from the exchange solver and the closed forms.

Even degrees 2n have an exact closed form; odd degrees 2n+1 are compared
with their large-n asymptotic value, so that ratio only tends to 1.
"""

from __future__ import annotations

import argparse

from chebkit.closed_forms import achieser_norms
from chebkit.remez import solve_real
from chebkit.sets_weights import IntervalUnion


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gaps", default="0.1,0.3,0.5,0.7")
    p.add_argument("--max-n", type=int, default=10)
    args = p.parse_args()
    print("a,n,even_solver,even_exact,even_rel_diff,odd_solver,odd_asymptotic,odd_ratio")
    for a in (float(t) for t in args.gaps.split(",")):
        s = IntervalUnion(((-1.0, -a), (a, 1.0)))
        for n in range(1, args.max_n + 1):
            even, odd = achieser_norms(a, n)
            te = solve_real(s, None, 2 * n).norm
            to = solve_real(s, None, 2 * n + 1).norm
            print(f"{a},{n},{te:.15e},{even:.15e},{abs(te - even) / even:.2e},{to:.15e},{odd:.15e},{to / odd:.6f}")


if __name__ == "__main__":
    main()
