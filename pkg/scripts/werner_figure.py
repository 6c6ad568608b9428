"""Werner-family comparison of reactivity, concurrence and global discord.

Writes the sweep CSV through the command-line runner and, if matplotlib is
installed, a plot next to it.

    python scripts/werner_figure.py --out werner.csv [--points 21] [--plot werner.png]
"""

import argparse
import csv
import sys

from qreact.cli import main as cli_main


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out", default="werner.csv")
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--samples", type=int, default=8192)
    p.add_argument("--plot", default=None, help="image path; needs matplotlib")
    args = p.parse_args()

    code = cli_main(["werner-sweep", "--points", str(args.points), "--samples", str(args.samples),
                     "--out", args.out])
    if code:
        sys.exit(code)
    with open(args.out) as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        print(f"{float(r['lambda']):.2f}  R={float(r['reactivity']):.4f}  "
              f"C={float(r['concurrence']):.4f}  GQD={float(r['gqd']):.4f}")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        lam = [float(r["lambda"]) for r in rows]
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for key, label in (("reactivity", "reactivity"), ("concurrence", "concurrence"), ("gqd", "global discord")):
            ax.plot(lam, [float(r[key]) for r in rows], marker="o", ms=3, label=label)
        ax.set_xlabel("lambda")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
