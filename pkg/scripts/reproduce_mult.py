"""Identify Mult for every worked loop and write one JSON report per case.

    python scripts/reproduce_mult.py --out results/mult
"""
import argparse
import json
import time
from pathlib import Path

from loopmult.cli import dump_report
from loopmult.config import SCHEMA_VERSION
from loopmult.loops import make_spec, reference_spec
from loopmult.mult import ImproperLoop, identify_mult

CASES = {
    "lf_y2": make_spec("LF", f="y^2"),
    "lf_y3": make_spec("LF", f="y^3"),
    "lh_x2": make_spec("LH", h="x^2"),
    "lv_x2": make_spec("LV", v="x^2"),
    "lv_x3": make_spec("LV", v="x^3"),
    "lvn_ref": reference_spec("LVN"),
    "lamalg_ref": reference_spec("LAMALG"),
    "lg5_x2_x3": make_spec("LG5", v1="x^2", v2="x^3"),
    "lg5_ref": reference_spec("LG5"),  # improper: v2 = x
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/mult")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(f"{'case':12s} {'left':>5s} {'right':>5s} {'mult':>5s}  verdict / prediction")
    for name, spec in CASES.items():
        t0 = time.perf_counter()
        try:
            rep = identify_mult(spec)
        except ImproperLoop as exc:
            print(f"{name:12s} improper: {exc}")
            continue
        body = {"schema_version": SCHEMA_VERSION, "case": name, "result": rep.to_json()}
        (out / f"{name}.json").write_text(dump_report(body))
        pred = "-" if rep.prediction is None else f"{rep.prediction.name} (agree={rep.agreement})"
        print(f"{name:12s} {rep.left.dim:5d} {rep.right.dim:5d} {rep.mult_dim:5d}  "
              f"{rep.mult.verdict.text} / {pred}  [{time.perf_counter() - t0:.2f}s]")
    print(f"reports in {out}/")


if __name__ == "__main__":
    main()
