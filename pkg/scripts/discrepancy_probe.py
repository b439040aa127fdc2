"""LV loops with v = p(x) + q(z): closure dimension against the amalgamated model.

For each degree pair the script reports the computed Mult dimension, the
dimension of the predicted amalgamated model, and the transversal check in
that model (both slot readings).  Nothing is adjusted toward either side.

    python scripts/discrepancy_probe.py --max-degree 3
"""
import argparse
import json
from pathlib import Path

from loopmult.groups import Amalg
from loopmult.kepka import LV_READINGS, lv_family, solve_transversal
from loopmult.loops import make_spec
from loopmult.mult import identify_mult
from loopmult.poly import Poly


def probe(n: int, m: int) -> dict:
    v = f"x^{n} + z^{m}"
    rep = identify_mult(make_spec("LV", v=v))
    row = {"v": v, "mult_dim": rep.mult_dim, "verdict": rep.mult.verdict.text,
           "fingerprint": rep.mult.verdict.fingerprint.to_json(),
           "predicted": None if rep.prediction is None else rep.prediction.to_json(),
           "agreement": rep.agreement, "transversal": {}}
    if rep.prediction is not None:
        M = Amalg(n, m)  # x-part in the first filiform block, z-part in the second
        for reading in LV_READINGS:
            k = solve_transversal(M, "ad", lv_family(M, Poly.parse(v), reading), 3)
            row["transversal"][reading] = {
                "model": f"Amalg({M.n},{M.m})", "solvable": k.solution.solvable,
                "generation_dim": None if k.generation is None else k.generation.dim,
                "group_dim": M.dim, "ok": k.ok}
    return row


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--out", default="results/discrepancy_probe.json")
    args = ap.parse_args()
    rows = []
    for n in range(1, args.max_degree + 1):
        for m in range(1, args.max_degree + 1):
            if (n, m) == (1, 1):
                continue  # improper
            row = probe(n, m)
            rows.append(row)
            pred = row["predicted"]
            tv = "; ".join(f"{r}: gen {t['generation_dim']}/{t['group_dim']}" if t["solvable"] else f"{r}: none"
                           for r, t in row["transversal"].items())
            print(f"v = {row['v']:12s} Mult dim {row['mult_dim']}  predicted "
                  f"{'-' if pred is None else pred['dim']}  agree={row['agreement']}  {tv}")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"schema_version": "1", "rows": rows}, indent=2, sort_keys=True,
                              ensure_ascii=False) + "\n")
    print(f"written {out}")


if __name__ == "__main__":
    main()
