#!/usr/bin/env python3
"""Print a sweep report (report.json) as a compact console table."""

import argparse
import json
import math


def cnum(v):
    if v is None:
        return None
    if isinstance(v, dict):
        return complex(v["re"], v["im"])
    return complex(v, 0.0)


def cfmt(z, digits=12):
    if z is None:
        return "-"
    if abs(z.imag) < 1e-300:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("report", help="path to report.json written by gapspectra sweep")
    ap.add_argument("--digits", type=int, default=12)
    args = ap.parse_args()

    with open(args.report) as f:
        rep = json.load(f)

    print(f"version {rep.get('version', '?')}  m = {rep.get('m')}  "
          f"threshold = {rep.get('threshold')}  prediction = {rep.get('prediction')}")
    print(f"config digest {rep.get('config_digest', '?')}")
    print()

    cols = ["eps", "z_bs", "z_grid", "z_minmax", "resid2", "resid3", "marker"]
    table = [cols]
    for row in rep["rows"]:
        table.append([
            f"{row['eps']:g}",
            cfmt(cnum(row.get("z_bs")), args.digits),
            cfmt(cnum(row.get("z_grid")), args.digits),
            cfmt(cnum(row.get("z_minmax")), args.digits),
            cfmt(cnum(row.get("resid2")), 3),
            cfmt(cnum(row.get("resid3")), 3),
            row.get("marker", ""),
        ])
    widths = [max(len(r[i]) for r in table) for i in range(len(cols))]
    for i, r in enumerate(table):
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if i == 0:
            print("  ".join("-" * w for w in widths))

    fit = rep.get("fitted")
    if fit:
        print()
        print(f"fitted: c2 = {cfmt(cnum(fit['c2']))}  c3 = {cfmt(cnum(fit['c3']))}  "
              f"residual exponent = {fit['residual_exponent']:.3f}")

    lr = rep.get("long_range")
    if lr:
        print()
        print(f"long range: sandwich C = {lr['sandwich_C']:.4g}")
        eps = [row["eps"] for row in rep["rows"]]
        for e, ratio, resid, band in zip(eps, lr["ratio"], lr["sandwich_resid"],
                                         lr["sandwich_band"]):
            ok = "nan" if math.isnan(ratio) else f"{ratio:.4f}"
            print(f"  eps {e:g}: ratio {ok}  resid {resid:.3e}  band {band:.3e}")


if __name__ == "__main__":
    main()
