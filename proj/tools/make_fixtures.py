#!/usr/bin/env python3
"""Regenerate tests/data/pima.csv and tests/data/kdd_attacks.csv.

Both tables come from the KEEL repository copies shipped in the
`imbalanced_databases` wheel on PyPI:

    pip download --no-deps imbalanced_databases==0.1.1 -d /tmp/wheels
    python3 tools/make_fixtures.py /tmp/wheels/imbalanced_databases-0.1.1-py3-none-any.whl
"""

import argparse
import csv
import pathlib
import zipfile

PIMA_COLUMNS = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age", "class"]

KDD_COLUMNS = [
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
    "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
    "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
    "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
    "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
    "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
    "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate", "attack",
]

KDD_PAIRS = [
    "buffer_overflow_vs_back",
    "guess_passwd_vs_satan",
    "land_vs_portsweep",
    "land_vs_satan",
    "rootkit-imap_vs_back",
]


def keel(zf, name):
    """Returns (symbolic attribute value lists by column, data rows) of a KEEL .dat file."""
    symbols, rows, col = {}, [], 0
    for line in zf.read(name).decode().splitlines():
        line = line.strip()
        if line.lower().startswith("@attribute"):
            if "{" in line:
                body = line[line.index("{") + 1 : line.rindex("}")]
                symbols[col] = [s.strip() for s in body.split(",")]
            col += 1
        elif line and not line.startswith("@"):
            rows.append([s.strip() for s in line.split(",")])
    return symbols, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wheel")
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "tests" / "data")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    zf = zipfile.ZipFile(args.wheel)

    _, pima = keel(zf, "imbalanced_databases/data/pima/pima.dat")
    with open(out / "pima.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PIMA_COLUMNS)
        w.writerows(pima)

    seen, merged = set(), []
    for pair in KDD_PAIRS:
        positive, negative = pair.split("_vs_")
        symbols, rows = keel(zf, f"imbalanced_databases/data/kddcup-{pair}/kddcup-{pair}.dat")
        for row in rows:
            label = positive if row[-1] == "positive" else negative
            features = row[:-1]
            # Symbolic columns become their position in the declared value list.
            # Only columns 1-3 are text; the others are declared as {0, 1, ...}.
            for c in (1, 2, 3):
                features[c] = str(symbols[c].index(features[c]))
            key = tuple(features + [label])
            if key not in seen:
                seen.add(key)
                merged.append(list(key))
    with open(out / "kdd_attacks.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(KDD_COLUMNS)
        w.writerows(merged)
    print(f"pima: {len(pima)} rows, kdd_attacks: {len(merged)} rows")


if __name__ == "__main__":
    main()
