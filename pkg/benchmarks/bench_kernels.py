"""Time the exact kernels: compiled vs pure Python, and mpq vs Fraction.

    python3 benchmarks/bench_kernels.py [--repeat N]

Inputs are the extension-chain stages of the bundled fixtures, so the
matrices have the sizes and entry growth seen in real solves.
"""
import argparse
import importlib
import os
import subprocess
import sys
import timeit
from fractions import Fraction
from pathlib import Path

from qcmoment.extension import extend_chain
from qcmoment.hankel import build_moment_matrix
from qcmoment.problem import load_problem

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def stages():
    out = []
    for name in ("twelve_atom_quasi_complex", "fifteen_atom_signed"):
        p = load_problem(FIXTURES / f"{name}.json")
        chain = extend_chain(build_moment_matrix(p.sequence, p.n), p.relations)
        last = chain.stage(max(chain.ranks))
        out.append((f"{name} M({last.n})", last.rows()))
    return out


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def time_solve(pure: bool, repeat: int) -> float:
    env = dict(os.environ)
    if pure:
        env["QCMOMENT_PURE_PYTHON"] = "1"
    code = (
        "import timeit;from qcmoment.problem import load_problem;from qcmoment.measure import solve;"
        f"p=load_problem({str(FIXTURES / 'fifteen_atom_signed.json')!r});"
        f"print(min(timeit.repeat(lambda: solve(p.sequence,p.relations,p.options),number=1,repeat={repeat})))"
    )
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    py = importlib.import_module("qcmoment._kernels_py")
    try:
        cy = importlib.import_module("qcmoment._kernels")
    except ImportError:
        cy = None
        print("compiled kernels not built; showing the pure backend only")

    print(f"{'matrix':<40} {'kernel':<12} {'pure mpq':>10} {'compiled':>10} {'speedup':>8} {'Fraction':>10} {'mpq gain':>9}")
    for label, rows in stages():
        frac = [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in rows]
        for kname in ("rank", "sym_inertia"):
            t_py = best(lambda: getattr(py, kname)(rows), args.repeat)
            t_cy = best(lambda: getattr(cy, kname)(rows), args.repeat) if cy else float("nan")
            t_fr = best(lambda: getattr(py, kname)(frac), args.repeat)
            print(
                f"{label:<40} {kname:<12} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms "
                f"{t_py / t_cy:>7.2f}x {t_fr * 1e3:>8.1f}ms {t_fr / t_py:>8.2f}x"
            )

    t_pure = time_solve(True, args.repeat)
    t_comp = time_solve(False, args.repeat)
    print(f"\nfull solve, fifteen-atom fixture: pure {t_pure * 1e3:.1f} ms, "
          f"default backend {t_comp * 1e3:.1f} ms, speedup {t_pure / t_comp:.2f}x")


if __name__ == "__main__":
    main()
