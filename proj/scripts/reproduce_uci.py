"""Best-effort comparison runs on the larger UCI sets.

The raw files are not bundled. Download them from the UCI repository into one
directory and pass it as --raw-dir; each converter writes a clean CSV (header,
numeric cells, label column "class") into --work-dir and then runs
`cefs benchmark` on it. Missing files are skipped with a message.

Column handling per set:

  advertisements  ad.data. 1558 features, label "ad."/"nonad." -> 1/0.
                  The three geometry fields and "local" may be "?"; those rows
                  are dropped by the loader (about 28% of rows).
  blog_feedback   blogData_train.csv. 280 features, last column = comments in
                  the next 24 h (real label, binned into --label-bins classes).
                  The official test files are not used; the usual 90/10 split
                  of the training file stands in for them.
  connect4        connect-4.data (decompress the .Z first). 42 cells coded
                  x=1, o=2, b=3; label win=1, loss=0, draw=2.
  forest_fires    forestfires.csv. month and day names become 1..12 and 1..7;
                  the burned area is the real label.
  gesture_phase   *_va3.csv files (processed velocity/acceleration features),
                  concatenated. 32 features; phase letters D,P,S,H,R -> 1..5.
  wdbc            data/wdbc.csv from this repository.

Full-size runs take from minutes (Forest Fires) to hours (Blog Feedback at
m = 280). Use --max-rows to subsample rows deterministically for a quick look.
"""
import argparse
import csv
import glob
import json
import random
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def subsample(rows, limit, seed=0):
    if not limit or len(rows) <= limit:
        return rows
    picked = sorted(random.Random(seed).sample(range(len(rows)), limit))
    return [rows[i] for i in picked]


def advertisements(raw):
    src = raw / "ad.data"
    rows = []
    with open(src) as f:
        for rec in csv.reader(f):
            if not rec:
                continue
            cells = [c.strip() for c in rec]
            label = "1" if cells[-1] == "ad." else "0"
            rows.append(cells[:-1] + [label])
    header = [f"f{j}" for j in range(len(rows[0]) - 1)] + ["class"]
    return header, rows


def blog_feedback(raw):
    src = raw / "blogData_train.csv"
    with open(src) as f:
        rows = [r for r in csv.reader(f) if r]
    header = [f"f{j}" for j in range(len(rows[0]) - 1)] + ["class"]
    return header, rows


def connect4(raw):
    src = raw / "connect-4.data"
    cell = {"x": "1", "o": "2", "b": "3"}
    outcome = {"win": "1", "loss": "0", "draw": "2"}
    rows = []
    with open(src) as f:
        for rec in csv.reader(f):
            if rec:
                rows.append([cell[c] for c in rec[:-1]] + [outcome[rec[-1]]])
    header = [f"{c}{r}" for c in "abcdefg" for r in range(1, 7)] + ["class"]
    return header, rows


def forest_fires(raw):
    src = raw / "forestfires.csv"
    months = "jan feb mar apr may jun jul aug sep oct nov dec".split()
    days = "mon tue wed thu fri sat sun".split()
    with open(src) as f:
        reader = csv.DictReader(f)
        names = [n for n in reader.fieldnames if n != "area"]
        rows = []
        for rec in reader:
            rec["month"] = str(months.index(rec["month"]) + 1)
            rec["day"] = str(days.index(rec["day"]) + 1)
            rows.append([rec[n] for n in names] + [rec["area"]])
    return names + ["class"], rows


def gesture_phase(raw):
    files = sorted(glob.glob(str(raw / "*_va3.csv")))
    if not files:
        raise FileNotFoundError(raw / "*_va3.csv")
    phase = {"D": "1", "P": "2", "S": "3", "H": "4", "R": "5"}
    header, rows = None, []
    for path in files:
        with open(path) as f:
            reader = csv.reader(f)
            head = next(reader)
            header = header or [h.strip() for h in head[:-1]] + ["class"]
            for rec in reader:
                if rec:
                    rows.append(rec[:-1] + [phase[rec[-1].strip()]])
    return header, rows


CONVERTERS = {
    "advertisements": advertisements,
    "blog_feedback": blog_feedback,
    "connect4": connect4,
    "forest_fires": forest_fires,
    "gesture_phase": gesture_phase,
}


def find_cli(explicit):
    for c in [explicit, ROOT / "build" / "cefs", shutil.which("cefs")]:
        if c and Path(c).exists():
            return str(c)
    sys.exit("cefs executable not found; build the project or pass --cefs")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--raw-dir", type=Path, required=True)
    ap.add_argument("--work-dir", type=Path, default=ROOT / "build" / "uci")
    ap.add_argument("--datasets", default=",".join(list(CONVERTERS) + ["wdbc"]))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-rows", type=int, default=0)
    ap.add_argument("--cefs", default=None)
    ap.add_argument("extra", nargs="*", help="extra flags passed to cefs benchmark")
    args = ap.parse_args()

    cli = find_cli(args.cefs)
    args.work_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    for name in args.datasets.split(","):
        if name == "wdbc":
            data = ROOT / "data" / "wdbc.csv"
            label = "diagnosis"
        else:
            try:
                header, rows = CONVERTERS[name](args.raw_dir)
            except FileNotFoundError as e:
                print(f"[skip] {name}: {e}")
                continue
            data = args.work_dir / f"{name}.csv"
            write_csv(data, header, subsample(rows, args.max_rows, args.seed))
            label = "class"
        out = args.work_dir / f"{name}.json"
        cmd = [cli, "benchmark", "--data", str(data), "--label", label, "--seed", str(args.seed),
               "--out", str(out)] + args.extra
        print("[run]", " ".join(cmd), flush=True)
        code = subprocess.call(cmd)
        if code not in (0, 2):
            print(f"[fail] {name}: exit {code}")
            continue
        report = json.loads(out.read_text())
        summary[name] = [
            {k: r[k] for k in ("method", "classifier", "cardinality", "mce", "delta_ir", "delta_t")}
            for r in report["records"]
        ]
        subprocess.call([cli, "report", "--in", str(out), "--format", "markdown"])
    (args.work_dir / "summary.json").write_text(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
